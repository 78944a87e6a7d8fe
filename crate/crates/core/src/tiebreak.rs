use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// How a search resolves equally good candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Keep the first candidate in enumeration order.
    #[default]
    Deterministic,
    /// Choose uniformly among equal candidates using a seeded RNG.
    Seeded(u64),
}

/// Stateful tie resolver threaded through a single synthesis run.
#[derive(Debug, Clone)]
pub struct Chooser {
    rng: Option<ChaCha8Rng>,
}

impl Chooser {
    pub fn new(mode: TieBreak) -> Self {
        Self {
            rng: match mode {
                TieBreak::Deterministic => None,
                TieBreak::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            },
        }
    }

    pub fn deterministic() -> Self {
        Self { rng: None }
    }

    pub fn is_random(&self) -> bool {
        self.rng.is_some()
    }

    /// Reservoir step for the `seen`-th equally good candidate (`seen ≥ 2`):
    /// returns true when it should replace the current choice.
    #[inline]
    pub fn replace_on_tie(&mut self, seen: u32) -> bool {
        match &mut self.rng {
            None => false,
            Some(rng) => rng.gen_range(0..seen) == 0,
        }
    }

    /// Index into `len` equal candidates; always 0 when deterministic.
    pub fn pick(&mut self, len: usize) -> usize {
        match &mut self.rng {
            Some(rng) if len > 1 => rng.gen_range(0..len),
            _ => 0,
        }
    }
}

/// Running maximum over scored candidates with tie resolution.
pub(crate) struct Best<T> {
    pub item: Option<(T, i32)>,
    seen: u32,
}

impl<T> Best<T> {
    pub fn new() -> Self {
        Self {
            item: None,
            seen: 0,
        }
    }

    pub fn offer(&mut self, item: T, score: i32, chooser: &mut Chooser) {
        match &self.item {
            Some((_, s)) if score < *s => {}
            Some((_, s)) if score == *s => {
                self.seen += 1;
                if chooser.replace_on_tie(self.seen) {
                    self.item = Some((item, score));
                }
            }
            _ => {
                self.item = Some((item, score));
                self.seen = 1;
            }
        }
    }
}
