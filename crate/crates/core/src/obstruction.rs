//! The local Chern obstruction as a difference of two local colengths:
//! the index of the collection minus the index of a generic collection of
//! constant forms on the same germ.
//!
//! The index of a collection on a complete intersection is taken to be the
//! local colength of its special-scheme ideal. The constant-form baseline
//! is an invariant of the germ and vanishes on smooth germs, so the
//! obstruction coincides with the index there.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::germs::{special_scheme_ideal, FormCollection, GermError, LinearCollection, Partition, VarietyGerm};
use crate::stdbasis::{local_colength, BasisError, Colength, EngineConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error(transparent)]
    Shape(#[from] GermError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error("non-isolated special scheme; exact Chern computation unavailable")]
    NonIsolated,
    #[error("genericity not certified; observed baseline colengths {}", render(.observed))]
    GenericityNotCertified { observed: Vec<Colength> },
    #[error("invalid trial configuration: {0}")]
    Config(&'static str),
}

fn render(values: &[Colength]) -> String {
    let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Randomization parameters for the generic constant-form baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: usize,
    pub coefficient_height: i64,
    pub max_resamples: usize,
    #[serde(skip)]
    pub engine: EngineConfig,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            seed: 0,
            trials: 3,
            coefficient_height: 10_000,
            max_resamples: 5,
            engine: EngineConfig::default(),
        }
    }
}

impl TrialConfig {
    pub fn with_seed(seed: u64) -> Self {
        TrialConfig {
            seed,
            ..TrialConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), ObstructionError> {
        if self.trials < 2 {
            return Err(ObstructionError::Config("at least two trials are needed"));
        }
        if self.coefficient_height < 1 {
            return Err(ObstructionError::Config("coefficient height must be positive"));
        }
        Ok(())
    }
}

/// Deterministic random stream for one trial, independent of scheduling.
pub(crate) fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Baseline {
    pub value: u64,
    /// Colength of every draw, in draw order.
    pub trial_values: Vec<Colength>,
    /// Number of draws beyond the configured trials.
    pub resamples: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub alg_index: u64,
    pub baseline: u64,
    pub chern: i64,
    pub trial_values: Vec<Colength>,
    pub resamples: usize,
    pub seed: u64,
    /// Set when the obstruction came out negative: either the collection
    /// degenerates in a non-generic way or the input is outside the
    /// complete-intersection scope.
    pub negative: bool,
}

/// Local colength of the special-scheme ideal, possibly infinite.
pub fn special_colength(
    germ: &VarietyGerm,
    collection: &FormCollection,
    engine: &EngineConfig,
) -> Result<Colength, ObstructionError> {
    let ideal = special_scheme_ideal(germ, collection)?;
    Ok(local_colength(&ideal, engine)?)
}

/// Index of the collection: the local colength of its special scheme.
pub fn alg_index(germ: &VarietyGerm, collection: &FormCollection) -> Result<u64, ObstructionError> {
    alg_index_with(germ, collection, &EngineConfig::default())
}

pub fn alg_index_with(
    germ: &VarietyGerm,
    collection: &FormCollection,
    engine: &EngineConfig,
) -> Result<u64, ObstructionError> {
    special_colength(germ, collection, engine)?
        .value()
        .ok_or(ObstructionError::NonIsolated)
}

/// The index `ind_{X,0}` of a collection. This is the same number as
/// [`alg_index`], which identifies the index of a collection on a complete
/// intersection with the colength of its special scheme; the difference of
/// this index and the obstruction is an invariant of the germ.
pub fn index_of_collection(germ: &VarietyGerm, collection: &FormCollection) -> Result<u64, ObstructionError> {
    alg_index(germ, collection)
}

/// Index of a generic collection of constant forms.
///
/// Draws `trials` integer collections. If all agree the common value is
/// returned; otherwise non-generic draws (which can only raise the
/// colength) are outvoted by resampling until the minimum has been seen
/// `trials` times, within `max_resamples` extra draws.
pub fn generic_linear_baseline(
    germ: &VarietyGerm,
    partition: &Partition,
    cfg: &TrialConfig,
) -> Result<Baseline, ObstructionError> {
    cfg.validate()?;
    if partition.total() != germ.dimension() {
        return Err(GermError::PartitionSum {
            sum: partition.total(),
            expected: germ.dimension(),
        }
        .into());
    }
    let draw = |trial: usize| -> Result<Colength, ObstructionError> {
        let mut rng = trial_rng(cfg.seed, trial as u64);
        let ell = LinearCollection::random(germ.nvars(), partition, cfg.coefficient_height, &mut rng);
        special_colength(germ, ell.collection(), &cfg.engine)
    };
    let mut values = Vec::with_capacity(cfg.trials + cfg.max_resamples);
    for t in 0..cfg.trials {
        values.push(draw(t)?);
    }
    let certified = |values: &[Colength]| -> Option<u64> {
        let min = *values.iter().min()?;
        let hits = values.iter().filter(|v| **v == min).count();
        match min {
            Colength::Finite(v) if hits >= cfg.trials => Some(v),
            _ => None,
        }
    };
    if let Some(value) = certified(&values) {
        return Ok(Baseline {
            value,
            trial_values: values,
            resamples: 0,
        });
    }
    for r in 0..cfg.max_resamples {
        values.push(draw(cfg.trials + r)?);
        if let Some(value) = certified(&values) {
            return Ok(Baseline {
                value,
                trial_values: values,
                resamples: r + 1,
            });
        }
    }
    Err(ObstructionError::GenericityNotCertified { observed: values })
}

/// `Ch = ind(ω) - ind(ℓ)` for a generic constant collection `ℓ`.
pub fn chern_obstruction(
    germ: &VarietyGerm,
    collection: &FormCollection,
    cfg: &TrialConfig,
) -> Result<ObstructionReport, ObstructionError> {
    let index = alg_index_with(germ, collection, &cfg.engine)?;
    let baseline = generic_linear_baseline(germ, collection.partition(), cfg)?;
    let chern = index as i64 - baseline.value as i64;
    Ok(ObstructionReport {
        alg_index: index,
        baseline: baseline.value,
        chern,
        trial_values: baseline.trial_values,
        resamples: baseline.resamples,
        seed: cfg.seed,
        negative: chern < 0,
    })
}
