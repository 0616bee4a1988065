//! JSON file formats for states and correlation bases.
//!
//! Matrices use `{"rows": n, "cols": m, "data": [[re, im], ...]}`; state
//! files carry a `"kind"` tag: `state_vector`, `density`, `cq` or `bipartite`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::{BipartiteState, ClassicalQuantumState, CorrelationBasis, DensityMatrix, StateVector};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CqBranch {
    pub p: f64,
    pub state: DensityMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateFile {
    StateVector {
        amplitudes: StateVector,
    },
    Density {
        matrix: DensityMatrix,
    },
    Cq {
        branches: Vec<CqBranch>,
    },
    Bipartite {
        #[serde(rename = "dimA")]
        dim_a: usize,
        #[serde(rename = "dimB")]
        dim_b: usize,
        matrix: DensityMatrix,
    },
}

/// A parsed and validated state.
#[derive(Debug, Clone)]
pub enum State {
    Pure(StateVector),
    Density(DensityMatrix),
    Cq(ClassicalQuantumState),
    Bipartite(BipartiteState),
}

impl StateFile {
    pub fn into_state(self) -> Result<State> {
        Ok(match self {
            StateFile::StateVector { amplitudes } => State::Pure(amplitudes),
            StateFile::Density { matrix } => State::Density(matrix),
            StateFile::Cq { branches } => {
                State::Cq(ClassicalQuantumState::new(branches.into_iter().map(|b| (b.p, b.state)).collect())?)
            }
            StateFile::Bipartite { dim_a, dim_b, matrix } => State::Bipartite(BipartiteState::new(matrix, dim_a, dim_b)?),
        })
    }
}

impl From<&State> for StateFile {
    fn from(s: &State) -> Self {
        match s {
            State::Pure(v) => StateFile::StateVector { amplitudes: v.clone() },
            State::Density(d) => StateFile::Density { matrix: d.clone() },
            State::Cq(cq) => StateFile::Cq {
                branches: cq
                    .branches()
                    .iter()
                    .map(|(p, s)| CqBranch { p: *p, state: s.clone() })
                    .collect(),
            },
            State::Bipartite(b) => StateFile::Bipartite {
                dim_a: b.dim_a(),
                dim_b: b.dim_b(),
                matrix: b.joint().clone(),
            },
        }
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::InvalidState(e.to_string())
}

pub fn parse_state(json: &str) -> Result<State> {
    serde_json::from_str::<StateFile>(json).map_err(parse_error)?.into_state()
}

pub fn state_to_json(s: &State) -> String {
    serde_json::to_string_pretty(&StateFile::from(s)).expect("state serializes")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisFile {
    pub system: Vec<StateVector>,
    pub apparatus: Vec<StateVector>,
}

pub fn parse_basis(json: &str) -> Result<CorrelationBasis> {
    let f: BasisFile = serde_json::from_str(json).map_err(parse_error)?;
    CorrelationBasis::new(f.system, f.apparatus)
}
