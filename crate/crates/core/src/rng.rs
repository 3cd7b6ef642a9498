/// Seeded generator used everywhere randomness affects an artifact.
///
/// ChaCha8 output is stable across platforms and crate versions, which the
/// byte-identical rerun guarantees depend on.
pub type SeededRng = rand_chacha::ChaCha8Rng;
