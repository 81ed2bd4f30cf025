use chrono::{DateTime, Duration, Utc};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Timestamp, Upri};

/// Source of fresh UPRIs and strictly increasing timestamps.
#[derive(Debug, Clone)]
pub struct Ids {
    rng: Option<ChaCha8Rng>,
    last: Option<Timestamp>,
    step: Option<Duration>,
}

impl Ids {
    /// Random UUIDs and wall-clock time.
    pub fn system() -> Self {
        Self { rng: None, last: None, step: None }
    }

    /// Reproducible identifiers and a clock that advances one millisecond per tick.
    pub fn seeded(seed: u64, start: DateTime<Utc>) -> Self {
        Self {
            rng: Some(ChaCha8Rng::seed_from_u64(seed)),
            last: Some(Timestamp::new(start)),
            step: Some(Duration::milliseconds(1)),
        }
    }

    pub fn mint(&mut self) -> Upri {
        let id = match &mut self.rng {
            Some(rng) => {
                let mut bytes = [0u8; 16];
                rng.fill_bytes(&mut bytes);
                uuid::Builder::from_random_bytes(bytes).into_uuid()
            }
            None => uuid::Uuid::new_v4(),
        };
        Upri::from_uuid(id)
    }

    pub fn now(&mut self) -> Timestamp {
        let next = match (self.step, self.last) {
            (Some(step), Some(last)) => Timestamp::new(last.as_datetime() + step),
            (None, Some(last)) => Timestamp::now().max(last.succ()),
            (_, None) => Timestamp::now(),
        };
        self.last = Some(next);
        next
    }

    /// Keeps the clock ahead of timestamps already present in a loaded store.
    pub fn observe(&mut self, t: Timestamp) {
        if self.last.is_none_or(|l| l < t) {
            self.last = Some(t);
        }
    }
}
