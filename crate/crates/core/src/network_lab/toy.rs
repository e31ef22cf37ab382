use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;

/// The six-node configurations: two triangles {0,1,2} and {3,4,5} optionally
/// joined by the four bridges 1–3, 1–4, 2–3, 2–4 (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ToyVariant {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
}

impl ToyVariant {
    pub const ALL: [ToyVariant; 9] = [
        ToyVariant::A,
        ToyVariant::B,
        ToyVariant::C,
        ToyVariant::D,
        ToyVariant::E,
        ToyVariant::F,
        ToyVariant::G,
        ToyVariant::H,
        ToyVariant::I,
    ];

    pub fn letter(self) -> char {
        (b'a' + self as u8) as char
    }

    /// Bridge amplitudes in the order 1–3, 1–4, 2–3, 2–4.
    fn bridges(self, seed: u64) -> Option<[Complex64; 4]> {
        let one = Complex64::new(1.0, 0.0);
        match self {
            ToyVariant::A | ToyVariant::B | ToyVariant::C => None,
            ToyVariant::D | ToyVariant::G => Some([one; 4]),
            ToyVariant::E | ToyVariant::H => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Some(std::array::from_fn(|_| {
                    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
                }))
            }
            // Node 0 reaches 3 through 1 and 2 with equal amplitude and 4
            // with opposite signs, so {0, 1+2, 3-4} is invariant and node 5
            // is never reached.
            ToyVariant::F | ToyVariant::I => Some([one, -one, one, -one]),
        }
    }
}

impl fmt::Display for ToyVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for ToyVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        ToyVariant::ALL
            .into_iter()
            .find(|v| lower.len() == 1 && lower.starts_with(v.letter()))
            .ok_or_else(|| Error::parse("toy variant", format!("expected one of a..i, got `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToyConfig {
    pub variant: ToyVariant,
    /// Seeds the random bridge phases of variants e and h.
    pub seed: u64,
}

impl ToyConfig {
    pub fn new(variant: ToyVariant, seed: u64) -> Self {
        ToyConfig { variant, seed }
    }
}

const BRIDGES: [(usize, usize); 4] = [(1, 3), (1, 4), (2, 3), (2, 4)];

pub fn toy_hamiltonian(cfg: &ToyConfig) -> HermitianMatrix {
    let one = Complex64::new(1.0, 0.0);
    let mut m = DMatrix::zeros(6, 6);
    for block in [0, 3] {
        for i in block..block + 3 {
            for j in block..block + 3 {
                if i != j {
                    m[(i, j)] = one;
                }
            }
        }
    }
    if let Some(amps) = cfg.variant.bridges(cfg.seed) {
        for (&(i, j), z) in BRIDGES.iter().zip(amps) {
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianMatrix::from_exact(m)
}
