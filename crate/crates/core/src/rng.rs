//! Bit-exact random streams: splitmix64 for seed derivation and
//! xoshiro256++ for the walk itself.

use crate::error::Error;
use crate::lattice::Direction;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(state: u64) -> Self {
        SplitMix64 { state }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// The `replica_index`-th output (0-based) of splitmix64 started at
/// `seed_base`.
pub fn derive_seed(seed_base: u64, replica_index: u64) -> u64 {
    // Jump directly to the requested state; splitmix64's state is a counter.
    let mut sm = SplitMix64::new(seed_base.wrapping_add(GOLDEN_GAMMA.wrapping_mul(replica_index)));
    sm.next_u64()
}

/// xoshiro256++ with 256 bits of state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Xoshiro256pp {
    s: [u64; 4],
}

impl Xoshiro256pp {
    /// Seeds the state with four consecutive splitmix64 outputs from `seed`.
    pub fn from_seed(seed: u64) -> Self {
        let mut sm = SplitMix64::new(seed);
        let s = [sm.next_u64(), sm.next_u64(), sm.next_u64(), sm.next_u64()];
        Xoshiro256pp { s }
    }

    pub fn from_state(s: [u64; 4]) -> Self {
        Xoshiro256pp { s }
    }

    pub fn state(&self) -> [u64; 4] {
        self.s
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[0].wrapping_add(s[3]).rotate_left(23).wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform direction among the 2d unit steps.
    ///
    /// When 2d is a power of two the low bits are used directly; otherwise
    /// the top ceil(log2(2d)) bits are rejection-sampled.
    #[inline]
    pub fn draw_direction(&mut self, dim: usize) -> Direction {
        let count = 2 * dim as u64;
        if count.is_power_of_two() {
            return Direction::from_index((self.next_u64() & (count - 1)) as usize);
        }
        let bits = 64 - (count - 1).leading_zeros();
        loop {
            let v = self.next_u64() >> (64 - bits);
            if v < count {
                return Direction::from_index(v as usize);
            }
        }
    }

    /// The state as 64 hex digits, word 0 first, each word big-endian.
    pub fn to_hex(&self) -> String {
        self.s.iter().map(|w| format!("{w:016x}")).collect()
    }

    pub fn from_hex(text: &str) -> Result<Self, Error> {
        let bad = || Error::Checkpoint {
            field: "rng_state".into(),
            reason: format!("expected 64 hex digits, got {text:?}"),
        };
        if text.len() != 64 || !text.is_ascii() {
            return Err(bad());
        }
        let mut s = [0u64; 4];
        for (i, word) in s.iter_mut().enumerate() {
            let mut bytes = [0u8; 8];
            hex::decode_to_slice(&text[16 * i..16 * (i + 1)], &mut bytes).map_err(|_| bad())?;
            *word = u64::from_be_bytes(bytes);
        }
        Ok(Xoshiro256pp { s })
    }
}
