//! JSON state files. Exactly one of three top-level keys:
//!
//! ```json
//! {"pure": [[re, im], ... 8 entries]}
//! {"dense": [[[re, im], ... 8], ... 8 rows]}
//! {"bloch": {"a": [..], "b": [..], "c": [..], "Q": [[..]], "R": [[..]], "S": [[..]], "tau": [[[..]]]}}
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::qstate::{compose_state, pure_to_density, BlochDecomposition, DensityMatrix3Q, PureState3Q};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StateFile {
    Pure(Vec<[f64; 2]>),
    Dense(Vec<Vec<[f64; 2]>>),
    Bloch(Box<BlochDecomposition>),
}

fn complex(pair: &[f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

impl StateFile {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::StateFile(e.to_string()))
    }

    pub fn from_state(rho: &DensityMatrix3Q) -> Self {
        let m = rho.matrix();
        StateFile::Dense(
            (0..8)
                .map(|i| (0..8).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        )
    }

    /// Converts to a validated density matrix.
    pub fn into_state(self) -> Result<DensityMatrix3Q> {
        match self {
            StateFile::Pure(amps) => {
                let amps: [Complex64; 8] = amps
                    .iter()
                    .map(complex)
                    .collect::<Vec<_>>()
                    .try_into()
                    .map_err(|v: Vec<_>| {
                        Error::StateFile(format!("pure state needs 8 amplitudes, got {}", v.len()))
                    })?;
                Ok(pure_to_density(&PureState3Q::new(amps)?))
            }
            StateFile::Dense(rows) => {
                if rows.len() != 8 || rows.iter().any(|r| r.len() != 8) {
                    return Err(Error::StateFile("dense state must be 8x8".into()));
                }
                let data = rows.iter().flatten().map(complex).collect();
                DensityMatrix3Q::validate(CMatrix::from_vec(8, 8, data))
            }
            StateFile::Bloch(d) => DensityMatrix3Q::validate(compose_state(&d)),
        }
    }
}

pub fn load_state(json: &str) -> Result<DensityMatrix3Q> {
    StateFile::parse(json)?.into_state()
}
