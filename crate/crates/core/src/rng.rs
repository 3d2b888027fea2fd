//! Per-path random streams.
//!
//! Every sample path owns an [`RngStream`] addressed by `(master_seed,
//! path_index)`. The stream is a ChaCha8 keystream: the key is derived from
//! the master seed and a [`Channel`], and the ChaCha stream id is the path
//! index. Two paths never share keystream blocks, and the values a path sees
//! do not depend on which thread generated it or in which order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Independent sub-streams of one path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    /// Innovations driving the process values.
    Process,
    /// Inter-arrival times between consecutive observations.
    InterArrival,
}

impl Channel {
    fn tag(self) -> u64 {
        match self {
            Channel::Process => 0x5052_4f43_4553_5300,
            Channel::InterArrival => 0x494e_5445_5241_5200,
        }
    }
}

/// Address of one path's randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub master_seed: u64,
    pub path_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, path_index: u64) -> Self {
        Self {
            master_seed,
            path_index,
        }
    }

    /// Generator for the given channel, positioned at the start of the stream.
    pub fn rng(&self, channel: Channel) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        let mut state = self.master_seed ^ channel.tag();
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.path_index);
        rng
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
