//! Degree sweep over synthetic scale-free networks.
//!
//! For every `k` on the grid and every instance: generate, analyze, rewire
//! and re-analyze, producing one CSV row. Instance seeds are a fixed function
//! of `(base_seed, k index, attempt index)`, and rows are emitted in
//! `(k, attempt)` order whatever the thread scheduling, so a config always
//! yields the same bytes.

use std::fmt::Write as _;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use netctl_core::generation::{self, GeneratorConfig};
use netctl_core::{alter_to_centralized_with, ReachRefresh, RewireOptions};

pub const CSV_HEADER: &str = "k,seed,n,l,n_d,in_before,in_after,ic_max_before,p_m,p_r,delta_nd,delta_ic";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub k_min: f64,
    pub k_max: f64,
    pub k_step: f64,
    pub instances_per_k: usize,
    pub base_seed: u64,
    pub gamma: f64,
    /// Keep only instances whose largest alternating component is an input component.
    pub filter_input_largest: bool,
    /// Generation attempts per `k` when filtering, as a multiple of `instances_per_k`.
    pub attempts_factor: usize,
    pub refresh: ReachRefresh,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n: 10_000,
            k_min: 5.0,
            k_max: 20.0,
            k_step: 0.1,
            instances_per_k: 20,
            base_seed: 0,
            gamma: 3.0,
            filter_input_largest: false,
            attempts_factor: 20,
            refresh: ReachRefresh::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: f64,
    pub seed: u64,
    pub n: usize,
    pub l: usize,
    pub n_d: usize,
    pub in_before: f64,
    pub in_after: f64,
    pub ic_max_before: f64,
    pub p_m: f64,
    pub p_r: f64,
    pub delta_nd: f64,
    pub delta_ic: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowResult {
    Row(SweepRow),
    Failed { k: f64, seed: u64, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KSummary {
    pub k: f64,
    pub attempts: usize,
    pub kept: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<RowResult>,
    pub per_k: Vec<KSummary>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.k_min.is_finite() && self.k_max.is_finite() && self.k_min <= self.k_max) {
            return Err(format!(
                "need k_min <= k_max (got {} and {})",
                self.k_min, self.k_max
            ));
        }
        if !(self.k_step.is_finite() && self.k_step > 0.0) {
            return Err(format!("need k_step > 0 (got {})", self.k_step));
        }
        if self.instances_per_k == 0 {
            return Err("need at least one instance per k".into());
        }
        if self.attempts_factor == 0 {
            return Err("attempts factor must be positive".into());
        }
        Ok(())
    }

    /// Grid points `k_min + i * k_step`, rounded to 10 decimals.
    pub fn k_values(&self) -> Vec<f64> {
        let steps = ((self.k_max - self.k_min) / self.k_step + 1e-9).floor() as usize;
        (0..=steps)
            .map(|i| ((self.k_min + i as f64 * self.k_step) * 1e10).round() / 1e10)
            .collect()
    }

    pub fn instance_seed(&self, k_index: usize, attempt: usize) -> u64 {
        self.base_seed ^ mix(((k_index as u64) << 32) | attempt as u64)
    }
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

enum Attempt {
    Kept(RowResult),
    Skipped,
}

fn run_instance(config: &SweepConfig, k: f64, seed: u64) -> Attempt {
    let fail = |message: String| Attempt::Kept(RowResult::Failed { k, seed, message });
    let gen = GeneratorConfig::scale_free(config.n, k, config.gamma, seed);
    let mut graph = match generation::generate(&gen) {
        Ok(g) => g,
        Err(e) => return fail(e.to_string()),
    };
    let options = RewireOptions {
        refresh: config.refresh,
        ..Default::default()
    };
    let outcome = match alter_to_centralized_with(&mut graph, &options) {
        Ok(o) => o,
        Err(e) => return fail(e.to_string()),
    };
    if config.filter_input_largest && !outcome.report_before.largest_is_input {
        return Attempt::Skipped;
    }
    if outcome.report_before.n_d != outcome.report_after.n_d {
        return fail(format!(
            "driver count changed from {} to {}",
            outcome.report_before.n_d, outcome.report_after.n_d
        ));
    }
    let m = outcome.metrics;
    Attempt::Kept(RowResult::Row(SweepRow {
        k,
        seed,
        n: m.n,
        l: m.l,
        n_d: outcome.report_before.n_d,
        in_before: outcome.report_before.in_fraction,
        in_after: outcome.report_after.in_fraction,
        ic_max_before: m.ic_max_before,
        p_m: m.p_m,
        p_r: m.p_r,
        delta_nd: m.delta_nd,
        delta_ic: m.delta_ic,
    }))
}

fn run_k(config: &SweepConfig, k_index: usize, k: f64) -> (Vec<RowResult>, KSummary) {
    let mut rows = Vec::with_capacity(config.instances_per_k);
    let max_attempts = if config.filter_input_largest {
        config.instances_per_k * config.attempts_factor
    } else {
        config.instances_per_k
    };
    let mut attempts = 0;
    while rows.len() < config.instances_per_k && attempts < max_attempts {
        let seed = config.instance_seed(k_index, attempts);
        attempts += 1;
        if let Attempt::Kept(row) = run_instance(config, k, seed) {
            rows.push(row);
        }
    }
    let kept = rows.len();
    (rows, KSummary { k, attempts, kept })
}

pub fn run_experiment_sweep(config: &SweepConfig) -> Result<SweepResult, String> {
    config.validate()?;
    let ks = config.k_values();
    let per_k: Vec<(Vec<RowResult>, KSummary)> = ks
        .par_iter()
        .enumerate()
        .map(|(i, &k)| run_k(config, i, k))
        .collect();
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (r, s) in per_k {
        rows.extend(r);
        summaries.push(s);
    }
    Ok(SweepResult {
        rows,
        per_k: summaries,
    })
}

impl SweepResult {
    pub fn data_rows(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter_map(|r| match r {
            RowResult::Row(row) => Some(row),
            RowResult::Failed { .. } => None,
        })
    }

    /// CSV with LF endings. Failed rows carry `error` in the `n` column and
    /// leave the metric columns empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            match row {
                RowResult::Row(r) => {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{},{},{},{}",
                        r.k,
                        r.seed,
                        r.n,
                        r.l,
                        r.n_d,
                        r.in_before,
                        r.in_after,
                        r.ic_max_before,
                        r.p_m,
                        r.p_r,
                        r.delta_nd,
                        r.delta_ic
                    );
                }
                RowResult::Failed { k, seed, .. } => {
                    let _ = writeln!(out, "{k},{seed},error,,,,,,,,,");
                }
            }
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut writer: W) -> io::Result<()> {
        writer.write_all(self.to_csv().as_bytes())?;
        writer.flush()
    }
}
