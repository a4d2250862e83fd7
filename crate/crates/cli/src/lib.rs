//! `dynnim` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification or self-play run finds a
//! mismatch or an unexpected engine loss, 2 on usage and other errors.

use std::ffi::OsString;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use dynnim::harness::selfplay::{
    random_starts_g1, random_starts_g2, selfplay, Opponent, SelfPlayConfig, SelfPlayReport, Start,
};
use dynnim::harness::tables::{g1_rows, g2_rows, write_rows};
use dynnim::harness::verify::{canonical_bounds, verify_g1, verify_g2, VerificationReport};
use dynnim::harness::{Format, Game};
use dynnim::oracle::OracleLimits;
use dynnim::{
    advise_g1, advise_g2, classify_g1, classify_g2, Advice, BoundFn, TurnPosition, Verdict,
    WeightedPosition,
};
use dynnim_service::Classification;
use serde_json::json;

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "dynnim",
    version,
    about = "P-positions and optimal play for turn-bounded and two-weight Nim"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// g1: turn-bounded Maximum Nim; g2: two-weight Nim
    #[arg(long, global = true)]
    game: Option<Game>,
    /// Game 1 bound function: const:c | affine:a,b | table:v1,v2,...
    #[arg(long = "f", global = true, value_name = "BOUNDFN")]
    f: Option<BoundFn>,
    /// text, json or csv
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Args)]
struct PositionArgs {
    /// Game 2 heavy stones, or Game 1 stones
    #[arg(long)]
    x: Option<u64>,
    /// Game 2 light stones
    #[arg(long)]
    y: Option<u64>,
    /// Game 1 stones
    #[arg(long)]
    u: Option<u64>,
    /// Game 1 turn index (default 1)
    #[arg(long)]
    k: Option<u64>,
}

impl PositionArgs {
    fn given(&self) -> bool {
        self.x.is_some() || self.y.is_some() || self.u.is_some() || self.k.is_some()
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// P or N verdict of one position
    Classify(PositionArgs),
    /// Recommended move from one position
    Advise(PositionArgs),
    /// Game 1 P-blocks at one turn
    Blocks {
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value_t = 100)]
        max_x: u64,
    },
    /// Game 2 verdict grid or Game 1 block table
    Table {
        /// Game 2: largest total weight 2x+y
        #[arg(long, default_value_t = 15)]
        max_weight: u64,
        /// Game 1: first turn
        #[arg(long, default_value_t = 1)]
        k: u64,
        /// Game 1: last turn (default: same as --k)
        #[arg(long)]
        max_k: Option<u64>,
        /// Game 1: largest stone count
        #[arg(long, default_value_t = 100)]
        max_x: u64,
    },
    /// Closed form against the brute-force oracle
    Verify {
        #[arg(long, default_value_t = 200)]
        max_x: u64,
        #[arg(long, default_value_t = 40)]
        max_k: u64,
        /// Game 2 weight bound (default 512, or 4096 with --extended)
        #[arg(long)]
        max_weight: Option<u64>,
        #[arg(long)]
        extended: bool,
    },
    /// Engine against a seeded random opponent or itself
    Selfplay {
        #[command(flatten)]
        start: PositionArgs,
        #[arg(long, default_value = "random")]
        opponent: Opponent,
        /// Let the opponent move first (random starts are then P-positions)
        #[arg(long)]
        engine_second: bool,
        /// Games per start
        #[arg(long, default_value_t = 1)]
        trials: u64,
        /// Number of random starts when no position is given
        #[arg(long, default_value_t = 200)]
        starts: usize,
        #[arg(long, default_value_t = 200)]
        max_x: u64,
        #[arg(long, default_value_t = 40)]
        max_k: u64,
        #[arg(long, default_value_t = 512)]
        max_weight: u64,
    },
    /// Run the HTTP play service
    Serve {
        #[arg(long, env = "DYNNIM_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

impl From<dynnim::Error> for Failure {
    fn from(e: dynnim::Error) -> Self {
        usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        usage(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    let mut buf = Vec::new();
    let code = match execute(&cli, &mut buf, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            return f.code;
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &buf),
        None => stdout.write_all(&buf),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    code
}

fn execute(cli: &Cli, out: &mut Vec<u8>, err: &mut dyn Write) -> Result<u8, Failure> {
    match &cli.command {
        Command::Classify(pos) => classify(cli, pos, out),
        Command::Advise(pos) => advise(cli, pos, out),
        Command::Blocks { k, max_x } => {
            if cli.game == Some(Game::G2) {
                return Err(usage("blocks is a g1 command"));
            }
            let rows = g1_rows(bound(cli)?, *k..=*k, *max_x)?;
            write_rows(&rows, cli.format, out)?;
            Ok(EXIT_OK)
        }
        Command::Table {
            max_weight,
            k,
            max_k,
            max_x,
        } => {
            match game(cli)? {
                Game::G2 => write_rows(&g2_rows(*max_weight), cli.format, out)?,
                Game::G1 => {
                    let last = max_k.unwrap_or(*k);
                    write_rows(&g1_rows(bound(cli)?, *k..=last, *max_x)?, cli.format, out)?
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            max_x,
            max_k,
            max_weight,
            extended,
        } => {
            let max_weight = max_weight.unwrap_or(if *extended { 4096 } else { 512 });
            verify(cli, *max_x, *max_k, max_weight, out, err)
        }
        Command::Selfplay {
            start,
            opponent,
            engine_second,
            trials,
            starts,
            max_x,
            max_k,
            max_weight,
        } => {
            let game = game(cli)?;
            let verdict = if *engine_second {
                Verdict::P
            } else {
                Verdict::N
            };
            let start_list = if start.given() {
                vec![match game {
                    Game::G1 => Start::G1 {
                        f: bound(cli)?.clone(),
                        start: g1_position(start)?,
                    },
                    Game::G2 => Start::G2 {
                        start: g2_position(start)?,
                    },
                }]
            } else {
                match game {
                    Game::G1 => {
                        let bounds = cli.f.clone().map_or_else(canonical_bounds, |f| vec![f]);
                        random_starts_g1(
                            *starts,
                            verdict,
                            &bounds,
                            *max_x,
                            (*max_k).max(1),
                            cli.seed,
                        )
                    }
                    Game::G2 => random_starts_g2(*starts, verdict, *max_weight, cli.seed),
                }
            };
            let config = SelfPlayConfig {
                opponent: *opponent,
                engine_first: !engine_second,
                trials: *trials,
                seed: cli.seed,
            };
            let report = selfplay(&start_list, &config)?;
            write_selfplay(cli.format, game, &report, out)?;
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            })
        }
        Command::Serve { port, host } => {
            let addr = SocketAddr::new(*host, *port);
            let runtime = tokio::runtime::Runtime::new()?;
            writeln!(err, "serving on http://{addr}")?;
            runtime.block_on(dynnim_service::serve(addr))?;
            Ok(EXIT_OK)
        }
    }
}

fn game(cli: &Cli) -> Result<Game, Failure> {
    cli.game.ok_or_else(|| usage("--game g1|g2 is required"))
}

fn bound(cli: &Cli) -> Result<&BoundFn, Failure> {
    cli.f.as_ref().ok_or_else(|| usage("g1 needs --f"))
}

fn g1_position(p: &PositionArgs) -> Result<TurnPosition, Failure> {
    if p.y.is_some() {
        return Err(usage("g1 positions take --u (or --x) and --k"));
    }
    let stones = match (p.u, p.x) {
        (Some(u), Some(x)) if u != x => return Err(usage("--u and --x disagree")),
        (Some(u), _) | (None, Some(u)) => u,
        (None, None) => return Err(usage("g1 needs --u")),
    };
    Ok(TurnPosition::new(stones, p.k.unwrap_or(1))?)
}

fn g2_position(p: &PositionArgs) -> Result<WeightedPosition, Failure> {
    if p.u.is_some() || p.k.is_some() {
        return Err(usage("g2 positions take --x and --y"));
    }
    let x = p.x.ok_or_else(|| usage("g2 needs --x"))?;
    Ok(WeightedPosition::new(x, p.y.unwrap_or(0))?)
}

fn classification(cli: &Cli, p: &PositionArgs) -> Result<Classification, Failure> {
    Ok(match game(cli)? {
        Game::G1 => {
            let f = bound(cli)?;
            let position = g1_position(p)?;
            let c = classify_g1(position, f);
            Classification::G1 {
                game: Game::G1,
                f: f.clone(),
                position,
                verdict: c.verdict,
                block: c.block,
            }
        }
        Game::G2 => {
            let position = g2_position(p)?;
            let c = classify_g2(position);
            Classification::G2 {
                game: Game::G2,
                position,
                verdict: c.verdict,
                family: c.family,
            }
        }
    })
}

fn no_csv(format: Format) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(usage("this command prints text or json"));
    }
    Ok(())
}

fn classify(cli: &Cli, p: &PositionArgs, out: &mut Vec<u8>) -> Result<u8, Failure> {
    no_csv(cli.format)?;
    let c = classification(cli, p)?;
    if cli.format == Format::Json {
        serde_json::to_writer_pretty(&mut *out, &c)?;
        writeln!(out)?;
        return Ok(EXIT_OK);
    }
    match c {
        Classification::G1 {
            f,
            position,
            verdict,
            block,
            ..
        } => match block {
            Some(n) => writeln!(out, "{position} {verdict} block {n} (f={f})")?,
            None => writeln!(out, "{position} {verdict} (f={f})")?,
        },
        Classification::G2 {
            position,
            verdict,
            family,
            ..
        } => match family {
            Some(tag) => writeln!(out, "{position} {verdict} {tag}")?,
            None => writeln!(out, "{position} {verdict}")?,
        },
    }
    Ok(EXIT_OK)
}

fn advise(cli: &Cli, p: &PositionArgs, out: &mut Vec<u8>) -> Result<u8, Failure> {
    no_csv(cli.format)?;
    let (position, verdict, advice, text) = match game(cli)? {
        Game::G1 => {
            let f = bound(cli)?;
            let pos = g1_position(p)?;
            let advice = advise_g1(pos, f)?;
            let text = describe(&advice, |n| format!("block {n}"));
            (json!(pos), classify_g1(pos, f).verdict, json!(advice), text)
        }
        Game::G2 => {
            let pos = g2_position(p)?;
            let advice = advise_g2(pos);
            let text = describe(&advice, |tag| tag.to_string());
            (json!(pos), classify_g2(pos).verdict, json!(advice), text)
        }
    };
    if cli.format == Format::Json {
        let doc = json!({"position": position, "verdict": verdict, "advice": advice});
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)?;
    } else {
        writeln!(out, "{}: {verdict}, {text}", p_text(&position))?;
    }
    Ok(EXIT_OK)
}

fn p_text(v: &serde_json::Value) -> String {
    match (v.get("x"), v.get("y"), v.get("u"), v.get("k")) {
        (Some(x), Some(y), _, _) => format!("({x},{y})"),
        (_, _, Some(u), Some(k)) => format!("({u},{k})"),
        _ => v.to_string(),
    }
}

fn describe<M, P, W>(advice: &Advice<M, P, W>, witness: impl Fn(&W) -> String) -> String
where
    M: std::fmt::Display,
    P: std::fmt::Display,
{
    match advice {
        Advice::Winning {
            mv,
            target,
            witness: w,
        } => {
            format!("{mv} -> {target} (P, {})", witness(w))
        }
        Advice::AllLosing { mv, target } => {
            format!("every move loses; fallback {mv} -> {target}")
        }
        Advice::NoMove => "no legal move".to_string(),
    }
}

fn verify(
    cli: &Cli,
    max_x: u64,
    max_k: u64,
    max_weight: u64,
    out: &mut Vec<u8>,
    err: &mut dyn Write,
) -> Result<u8, Failure> {
    no_csv(cli.format)?;
    let limits = OracleLimits {
        max_weight: OracleLimits::default().max_weight.max(max_weight),
        ..OracleLimits::default()
    };
    let mut reports: Vec<VerificationReport> = Vec::new();
    if cli.game != Some(Game::G2) {
        let bounds = cli.f.clone().map_or_else(canonical_bounds, |f| vec![f]);
        // one worker and one oracle memo per bound; reports keep the input order
        let results: Vec<dynnim::Result<VerificationReport>> = std::thread::scope(|s| {
            let handles: Vec<_> = bounds
                .iter()
                .map(|f| s.spawn(move || verify_g1(f, max_x, max_k, limits)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("verification worker panicked"))
                .collect()
        });
        for r in results {
            reports.push(r?);
        }
    }
    if cli.game != Some(Game::G1) {
        reports.push(verify_g2(max_weight, limits)?);
    }
    for r in &reports {
        writeln!(
            err,
            "{} [{}]: wall time {:.3?}",
            r.game, r.params, r.wall_time
        )?;
    }
    if cli.format == Format::Json {
        serde_json::to_writer_pretty(&mut *out, &reports)?;
        writeln!(out)?;
    } else {
        for r in &reports {
            writeln!(out, "{r}")?;
        }
    }
    Ok(if reports.iter().all(VerificationReport::passed) {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

fn write_selfplay(
    format: Format,
    game: Game,
    report: &SelfPlayReport,
    out: &mut Vec<u8>,
) -> Result<(), Failure> {
    no_csv(format)?;
    if format == Format::Json {
        serde_json::to_writer_pretty(&mut *out, report)?;
        writeln!(out)?;
        return Ok(());
    }
    let opponent = serde_json::to_value(report.opponent)?;
    writeln!(
        out,
        "{} {game} selfplay seed={} opponent={} engine_first={}: engine won {}/{}, {} from winning starts, {} unexpected losses",
        if report.passed() { "PASS" } else { "FAIL" },
        report.seed,
        opponent.as_str().unwrap_or_default(),
        report.engine_first,
        report.engine_wins,
        report.trials,
        report.winning_starts,
        report.unexpected_losses()
    )?;
    Ok(())
}
