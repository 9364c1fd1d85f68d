//! Named resource states used throughout the examples and tests.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qstate::{pure_to_density, DensityMatrix3Q, PureState3Q};
use crate::wclass::{wclass_state, WClassParams, EXAMPLE3_RAW};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// (|000⟩ + |111⟩)/√2
    Ghz,
    /// (|001⟩ + |010⟩ + |100⟩)/√3
    W,
    /// W-class state at λ ∝ (0.7, 0.7, 0.09, 0.11), renormalized.
    WExample3,
    /// Equal mixture of (|000⟩ ± |100⟩ ± |110⟩ + |111⟩)/2.
    GammaMix,
    /// Equal mixture of (|000⟩ ± |100⟩ ± |110⟩ + |111⟩)/2. The published kets
    /// for this example coincide with [`Preset::GammaMix`].
    DeltaMix,
    /// Equal mixture of (|000⟩ + |100⟩ + |101⟩ ± |110⟩)/2.
    BetaMix,
    /// I/8
    Mixed,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::Ghz,
        Preset::W,
        Preset::WExample3,
        Preset::GammaMix,
        Preset::DeltaMix,
        Preset::BetaMix,
        Preset::Mixed,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Ghz => "ghz",
            Preset::W => "w",
            Preset::WExample3 => "wexample3",
            Preset::GammaMix => "gamma-mix",
            Preset::DeltaMix => "delta-mix",
            Preset::BetaMix => "beta-mix",
            Preset::Mixed => "mixed",
        }
    }

    pub fn state(&self) -> DensityMatrix3Q {
        let ket = |terms: &[(&str, f64)]| PureState3Q::from_kets(terms).expect("valid preset ket");
        match self {
            Preset::Ghz => pure_to_density(&ket(&[("000", 1.0), ("111", 1.0)])),
            Preset::W => pure_to_density(&ket(&[("001", 1.0), ("010", 1.0), ("100", 1.0)])),
            Preset::WExample3 => {
                let (p, _) = WClassParams::renormalized(EXAMPLE3_RAW).expect("non-zero parameters");
                pure_to_density(&wclass_state(&p))
            }
            Preset::GammaMix | Preset::DeltaMix => DensityMatrix3Q::equal_mixture(
                &ket(&[("000", 1.0), ("100", 1.0), ("110", 1.0), ("111", 1.0)]),
                &ket(&[("000", 1.0), ("100", -1.0), ("110", -1.0), ("111", 1.0)]),
            ),
            Preset::BetaMix => DensityMatrix3Q::equal_mixture(
                &ket(&[("000", 1.0), ("100", 1.0), ("101", 1.0), ("110", 1.0)]),
                &ket(&[("000", 1.0), ("100", 1.0), ("101", 1.0), ("110", -1.0)]),
            ),
            Preset::Mixed => DensityMatrix3Q::maximally_mixed(),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Preset::ALL.iter().map(Preset::name).collect();
                Error::InvalidParams(format!("unknown preset {s:?}; expected one of {}", names.join(", ")))
            })
    }
}
