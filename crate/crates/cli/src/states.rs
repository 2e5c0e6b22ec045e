//! State ingestion: the JSON interchange format (see
//! `schemas/states.schema.json`) and seeded Haar generators.

use serde::Deserialize;

use qswitch_core::invariants::{State, StateTuple};
use qswitch_core::linalg::{
    haar_random_density, haar_random_state, C64, ComplexMatrix, DensityMatrix, PureState,
};
use qswitch_core::Error;

/// A complex number is always a two-element `[re, im]` array.
type Complex = [f64; 2];

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub local_dim: usize,
    pub states: Vec<StateEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub enum StateEntry {
    #[serde(rename = "vector")]
    Vector(Vec<Complex>),
    #[serde(rename = "matrix")]
    Matrix(Vec<Vec<Complex>>),
}

fn to_c64(x: Complex) -> C64 {
    C64::new(x[0], x[1])
}

pub fn parse_state_file(text: &str) -> Result<StateFile, Error> {
    serde_json::from_str(text).map_err(|e| {
        Error::invalid_input(format!(
            "malformed state file at line {}, column {}: {}",
            e.line(),
            e.column(),
            e
        ))
    })
}

/// Builds a matrix from the interchange format, checking squareness.
pub fn entry_matrix(rows: &[Vec<Complex>], index: usize) -> Result<ComplexMatrix, Error> {
    let converted: Vec<Vec<C64>> = rows
        .iter()
        .map(|r| r.iter().copied().map(to_c64).collect())
        .collect();
    ComplexMatrix::from_rows(converted)
        .map_err(|e| Error::invalid_input(format!("state {index}: {e}")))
}

impl StateFile {
    /// Validates every entry and assembles the state tuple; errors name
    /// the 1-based index of the offending state.
    pub fn to_tuple(&self) -> Result<StateTuple, Error> {
        if self.local_dim < 2 {
            return Err(Error::invalid_input("local_dim must be at least 2"));
        }
        let mut states = Vec::with_capacity(self.states.len());
        for (i, entry) in self.states.iter().enumerate() {
            let index = i + 1;
            let state = match entry {
                StateEntry::Vector(v) => {
                    if v.len() != self.local_dim {
                        return Err(Error::dim_mismatch(format!(
                            "state {index} has dimension {}, expected local_dim {}",
                            v.len(),
                            self.local_dim
                        )));
                    }
                    let psi = PureState::new(v.iter().copied().map(to_c64).collect())
                        .map_err(|e| Error::invalid_state(format!("state {index}: {e}")))?;
                    State::Pure(psi)
                }
                StateEntry::Matrix(rows) => {
                    let m = entry_matrix(rows, index)?;
                    if !(m.is_square() && m.rows() == self.local_dim) {
                        return Err(Error::dim_mismatch(format!(
                            "state {index} is {}x{}, expected local_dim {}",
                            m.rows(),
                            m.cols(),
                            self.local_dim
                        )));
                    }
                    let rho = DensityMatrix::new(m)
                        .map_err(|e| Error::invalid_state(format!("state {index}: {e}")))?;
                    State::Mixed(rho)
                }
            };
            states.push(state);
        }
        StateTuple::new(states)
    }
}

/// A seeded Haar-random tuple: `count` states of dimension `dim`,
/// mixed (rank-2) when `mixed` is set, pure otherwise.
pub fn random_tuple(count: usize, dim: usize, seed: u64, mixed: bool) -> Result<StateTuple, Error> {
    if count == 0 {
        return Err(Error::invalid_input("--random needs at least one state"));
    }
    let states = (0..count)
        .map(|i| {
            let s = seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
            if mixed {
                Ok(State::Mixed(haar_random_density(s, dim, 2)?))
            } else {
                Ok(State::Pure(haar_random_state(s, dim)?))
            }
        })
        .collect::<Result<Vec<_>, Error>>()?;
    StateTuple::new(states)
}

/// Resolves the "exactly one of file / generator" rule shared by the
/// state-consuming subcommands.
pub fn load_tuple(
    states_path: Option<&std::path::Path>,
    random: Option<usize>,
    dim: usize,
    seed: u64,
    mixed: bool,
) -> Result<StateTuple, Error> {
    match (states_path, random) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::invalid_input(format!("cannot read {}: {e}", path.display()))
            })?;
            parse_state_file(&text)?.to_tuple()
        }
        (None, Some(count)) => random_tuple(count, dim, seed, mixed),
        (Some(_), Some(_)) => Err(Error::invalid_input(
            "--states and --random are mutually exclusive",
        )),
        (None, None) => Err(Error::invalid_input(
            "provide states via --states <path> or --random <count>",
        )),
    }
}
