//! Counter-based random streams.
//!
//! Every trial owns independent ChaCha8 streams addressed by
//! `(master_seed, purpose, trial_index)`: the seed and purpose select the key,
//! the trial index selects the stream. A stream can be reopened at any word
//! position, so no generator state has to be shared or stored between calls.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub(crate) enum Purpose {
    /// Arrival gaps, radii and interferer fading, interleaved per point.
    Field = 0x66_6965_6c64,
    /// Fading of the reference link.
    ReferenceLink = 0x7265_666c_6e6b,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct StreamKey([u8; 32]);

impl StreamKey {
    pub(crate) fn new(master_seed: u64, purpose: Purpose) -> Self {
        let mut state = master_seed ^ (purpose as u64).rotate_left(17);
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        StreamKey(key)
    }

    pub(crate) fn open(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.0);
        rng.set_stream(trial);
        rng
    }

    pub(crate) fn open_at(&self, trial: u64, word_pos: u128) -> ChaCha8Rng {
        let mut rng = self.open(trial);
        rng.set_word_pos(word_pos);
        rng
    }
}
