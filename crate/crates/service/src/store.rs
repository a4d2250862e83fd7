//! In-memory session storage with idle-time eviction.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, MutexGuard, TryLockError};
use std::time::{Duration, Instant};

use crate::session::Session;

pub const DEFAULT_TTL: Duration = Duration::from_secs(60 * 60);

pub type SessionSlot = Arc<Mutex<Session>>;

struct Entry {
    slot: SessionSlot,
    touched: Instant,
}

/// Sessions idle for longer than the TTL are dropped on the next access.
pub struct SessionStore {
    ttl: Duration,
    entries: Mutex<HashMap<String, Entry>>,
}

impl Default for SessionStore {
    fn default() -> Self {
        SessionStore::with_ttl(DEFAULT_TTL)
    }
}

impl SessionStore {
    pub fn with_ttl(ttl: Duration) -> Self {
        SessionStore {
            ttl,
            entries: Mutex::new(HashMap::new()),
        }
    }

    fn entries(&self) -> MutexGuard<'_, HashMap<String, Entry>> {
        let mut map = self.entries.lock().unwrap_or_else(|e| e.into_inner());
        let now = Instant::now();
        map.retain(|_, e| now.duration_since(e.touched) < self.ttl);
        map
    }

    pub fn insert(&self, session: Session) -> SessionSlot {
        let id = session.id().to_string();
        let slot = Arc::new(Mutex::new(session));
        self.entries().insert(
            id,
            Entry {
                slot: slot.clone(),
                touched: Instant::now(),
            },
        );
        slot
    }

    pub fn get(&self, id: &str) -> Option<SessionSlot> {
        let mut map = self.entries();
        let entry = map.get_mut(id)?;
        entry.touched = Instant::now();
        Some(entry.slot.clone())
    }

    pub fn len(&self) -> usize {
        self.entries().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Locks a session without waiting. `None` means another request holds it.
pub fn try_lock(slot: &SessionSlot) -> Option<MutexGuard<'_, Session>> {
    match slot.try_lock() {
        Ok(guard) => Some(guard),
        Err(TryLockError::Poisoned(e)) => Some(e.into_inner()),
        Err(TryLockError::WouldBlock) => None,
    }
}
