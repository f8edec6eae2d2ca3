//! Spin-sector settings `(N, d, 2S, 2M)`.

use std::fmt;

/// Error for quantum numbers that do not describe a spin sector.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SettingError {
    #[error("need at least one particle and one orbital")]
    Empty,
    #[error("2S = {two_s} exceeds N = {n}")]
    SpinTooLarge { n: u32, two_s: u32 },
    #[error("N = {n} and 2S = {two_s} must have equal parity")]
    Parity { n: u32, two_s: u32 },
    #[error("|2M| = {} exceeds 2S = {two_s} or has the wrong parity", two_m.unsigned_abs())]
    BadProjection { two_s: u32, two_m: i32 },
    #[error("N = {n} does not fit into {d} orbitals")]
    TooManyParticles { n: u32, d: u32 },
    #[error("{n} particles cannot carry spin 2S = {two_s} in {d} orbitals")]
    SpinDoesNotFit { n: u32, d: u32, two_s: u32 },
}

/// A spin sector `H_N^(S,M)` over `d` spatial orbitals.
///
/// Spin quantum numbers are stored doubled so they stay integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Setting {
    pub n_particles: u32,
    pub n_orbitals: u32,
    pub two_s: u32,
    pub two_m: i32,
}

impl Setting {
    pub fn new(n_particles: u32, n_orbitals: u32, two_s: u32, two_m: i32) -> Result<Self, SettingError> {
        let s = Setting {
            n_particles,
            n_orbitals,
            two_s,
            two_m,
        };
        s.check()?;
        Ok(s)
    }

    /// The `M = S` member of the multiplet.
    pub fn highest(n_particles: u32, n_orbitals: u32, two_s: u32) -> Result<Self, SettingError> {
        Self::new(n_particles, n_orbitals, two_s, two_s as i32)
    }

    fn check(&self) -> Result<(), SettingError> {
        let (n, d, two_s, two_m) = (self.n_particles, self.n_orbitals, self.two_s, self.two_m);
        if n == 0 || d == 0 {
            return Err(SettingError::Empty);
        }
        if two_s > n {
            return Err(SettingError::SpinTooLarge { n, two_s });
        }
        if (n - two_s) % 2 != 0 {
            return Err(SettingError::Parity { n, two_s });
        }
        if two_m.unsigned_abs() > two_s || (two_s as i32 - two_m) % 2 != 0 {
            return Err(SettingError::BadProjection { two_s, two_m });
        }
        if n > 2 * d {
            return Err(SettingError::TooManyParticles { n, d });
        }
        // K doubly occupied plus 2S singly occupied orbitals.
        if (n - two_s) / 2 + two_s > d {
            return Err(SettingError::SpinDoesNotFit { n, d, two_s });
        }
        Ok(())
    }

    /// Number of doubly occupied orbitals of the highest weight, `K = (N − 2S)/2`.
    pub fn k(&self) -> u32 {
        (self.n_particles - self.two_s) / 2
    }

    /// `J = (N + 2S)/2`.
    pub fn j(&self) -> u32 {
        (self.n_particles + self.two_s) / 2
    }

    pub fn d(&self) -> usize {
        self.n_orbitals as usize
    }

    pub fn n_up(&self) -> u32 {
        ((self.n_particles as i32 + self.two_m) / 2) as u32
    }

    pub fn n_down(&self) -> u32 {
        ((self.n_particles as i32 - self.two_m) / 2) as u32
    }

    pub fn key(&self) -> SettingKey {
        SettingKey {
            n_particles: self.n_particles,
            n_orbitals: self.n_orbitals,
            two_s: self.two_s,
        }
    }

    /// `S(S+1)` as a float.
    pub fn s_squared(&self) -> f64 {
        let s = self.two_s as f64 / 2.0;
        s * (s + 1.0)
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(N={}, d={}, S={}, M={})",
            self.n_particles,
            self.n_orbitals,
            half(self.two_s as i64),
            half(self.two_m as i64)
        )
    }
}

/// A setting without the magnetic quantum number; constraints do not depend on `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SettingKey {
    pub n_particles: u32,
    pub n_orbitals: u32,
    pub two_s: u32,
}

impl SettingKey {
    pub fn new(n_particles: u32, n_orbitals: u32, two_s: u32) -> Self {
        SettingKey {
            n_particles,
            n_orbitals,
            two_s,
        }
    }

    /// The `M = S` sector of this key, validated.
    pub fn setting(&self) -> Result<Setting, SettingError> {
        Setting::highest(self.n_particles, self.n_orbitals, self.two_s)
    }

    pub fn d(&self) -> usize {
        self.n_orbitals as usize
    }
}

impl fmt::Display for SettingKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(N={}, d={}, S={})",
            self.n_particles,
            self.n_orbitals,
            half(self.two_s as i64)
        )
    }
}

/// Renders a doubled quantum number, e.g. `3 -> "3/2"`, `2 -> "1"`.
pub fn half(twice: i64) -> String {
    if twice % 2 == 0 {
        (twice / 2).to_string()
    } else {
        format!("{twice}/2")
    }
}
