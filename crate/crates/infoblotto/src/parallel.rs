//! Chunk-parallel Monte Carlo. Chunks are reduced in index order, so the
//! results are bit-identical to the sequential ones in the core crate.

use infoblotto_core::oracle::{self, Certificate, CertifyOptions, ChunkStats, Instance, McEstimate, McSampler};
use infoblotto_core::{Error, GameParams, Result, StrategyProfile};
use rayon::prelude::*;

fn reduce(sampler: &McSampler, samples: u64) -> McEstimate {
    let chunks: Vec<ChunkStats> = (0..McSampler::chunk_count(samples))
        .into_par_iter()
        .map(|k| sampler.chunk(k, McSampler::chunk_len(samples, k)))
        .collect();
    chunks.into_iter().fold(ChunkStats::EMPTY, ChunkStats::merge).estimate()
}

pub fn monte_carlo_value(profile: &StrategyProfile, game: &GameParams, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples < 1 {
        return Err(Error::InvalidParameter("Monte Carlo needs at least one sample".into()));
    }
    let sampler = McSampler::new(profile, game, seed)?;
    Ok(reduce(&sampler, samples))
}

pub fn certify(profile: &StrategyProfile, instance: &Instance, options: &CertifyOptions) -> Result<Certificate> {
    oracle::certify_with(profile, instance, options, reduce)
}
