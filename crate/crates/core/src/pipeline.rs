//! End-to-end experiment runner: graph family, reduction, proof, compression,
//! checking, and one measurement row per instance and mode.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use thiserror::Error;

use crate::compression::{compress, CompressError, Mode};
use crate::dagcheck::check_dag;
use crate::graph::{family, GraphError};
use crate::prover::{prove_beta_capped, BetaProof, ProverError};
use crate::stats::{FamilyRow, ProofFamily, StatsError};

/// Stack size for worker threads; proof search and translation recurse deeply.
pub const WORKER_STACK: usize = 256 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub family: String,
    pub sizes: RangeInclusive<usize>,
    pub modes: Vec<Mode>,
    pub seed: u64,
    pub oracle_cap: usize,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("instance {instance}: {source}")]
    Prover {
        instance: String,
        source: ProverError,
    },
    #[error("instance {instance}: {source}")]
    Compress {
        instance: String,
        source: CompressError,
    },
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

pub fn instance_id(family: &str, n: usize, seed: u64) -> String {
    if family == "random" {
        format!("{family}-{n}-s{seed}")
    } else {
        format!("{family}-{n}")
    }
}

/// Compresses and checks `beta` in `mode`, producing its measurement row.
pub fn measure(
    instance: &str,
    n: usize,
    beta: &BetaProof,
    mode: Mode,
) -> Result<FamilyRow, CompressError> {
    let d = compress(&beta.proof, mode)?;
    let r = check_dag(&d);
    Ok(FamilyRow {
        instance: instance.to_string(),
        n,
        m: beta.proof.conclusion().node_count(),
        tree_height: beta.metrics.height,
        tree_size: beta.metrics.size,
        dag_nodes: d.node_count(),
        dag_edges: d.edge_count(),
        checker_steps: r.steps(),
        mode,
        accepted: r.is_accept(),
    })
}

fn run_instance(cfg: &ExperimentConfig, n: usize) -> Result<ProofFamily, PipelineError> {
    let g = family(&cfg.family, n, cfg.seed)?;
    let id = instance_id(&cfg.family, n, cfg.seed);
    let mut out = ProofFamily::new(cfg.family.clone());
    let beta = match prove_beta_capped(&g, cfg.oracle_cap) {
        Ok(b) => b,
        Err(ProverError::NotATautology) => {
            out.add_skipped(id);
            return Ok(out);
        }
        Err(source) => {
            return Err(PipelineError::Prover {
                instance: id,
                source,
            })
        }
    };
    for &mode in &cfg.modes {
        let row = measure(&id, g.n(), &beta, mode).map_err(|source| PipelineError::Compress {
            instance: id.clone(),
            source,
        })?;
        out.add_row(row)?;
    }
    Ok(out)
}

/// Runs every size in parallel; results are merged in size order so the
/// family is identical across runs.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ProofFamily, PipelineError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .stack_size(WORKER_STACK)
        .build()
        .map_err(|e| PipelineError::Pool(e.to_string()))?;
    let sizes: Vec<usize> = cfg.sizes.clone().collect();
    let parts: Vec<Result<ProofFamily, PipelineError>> =
        pool.install(|| sizes.par_iter().map(|&n| run_instance(cfg, n)).collect());
    let mut fam = ProofFamily::new(cfg.family.clone());
    for part in parts {
        fam.merge(part?)?;
    }
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(family: &str, sizes: RangeInclusive<usize>) -> ExperimentConfig {
        ExperimentConfig {
            family: family.to_string(),
            sizes,
            modes: vec![Mode::Subtree],
            seed: 0,
            oracle_cap: 12,
        }
    }

    #[test]
    fn path_family_rows() {
        let fam = run_experiment(&cfg("path", 3..=5)).unwrap();
        assert_eq!(fam.rows().len(), 3);
        assert!(fam.rows().iter().all(|r| r.accepted));
        let ids: Vec<&str> = fam.rows().iter().map(|r| r.instance.as_str()).collect();
        assert_eq!(ids, ["path-3", "path-4", "path-5"]);
    }

    #[test]
    fn cycles_are_all_skipped() {
        let fam = run_experiment(&cfg("cycle", 3..=5)).unwrap();
        assert!(fam.rows().is_empty());
        assert_eq!(fam.skipped(), ["cycle-3", "cycle-4", "cycle-5"]);
    }

    #[test]
    fn random_ids_carry_the_seed() {
        assert_eq!(instance_id("random", 5, 7), "random-5-s7");
    }
}
