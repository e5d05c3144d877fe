//! Gait-cycle data: CSV ingestion, a synthetic stand-in generator, per-channel
//! normalization, deterministic splits, batching, and the feature-corruption
//! injector used by the noise experiments.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::autodiff::{Id, Session, Value};
use crate::error::{Error, Result};

pub const CHANNELS: usize = 3;
pub const TIME_POINTS: usize = 100;
pub const CHANNEL_NAMES: [&str; CHANNELS] = ["hip", "knee", "ankle"];

/// One stride: hip/knee/ankle sagittal angles over 100 normalized time
/// points, stored channel-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GaitSample {
    angles: Vec<f64>, // [CHANNELS * TIME_POINTS]
}

impl GaitSample {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.len() != CHANNELS * TIME_POINTS {
            return Err(Error::Dimension {
                op: "gait_sample",
                detail: format!("expected {} values, got {}", CHANNELS * TIME_POINTS, angles.len()),
            });
        }
        if !angles.iter().all(|x| x.is_finite()) {
            return Err(Error::NumericDomain {
                op: "gait_sample",
                detail: "non-finite angle".to_string(),
            });
        }
        Ok(GaitSample { angles })
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        &self.angles[c * TIME_POINTS..(c + 1) * TIME_POINTS]
    }

    pub fn channel_mut(&mut self, c: usize) -> &mut [f64] {
        &mut self.angles[c * TIME_POINTS..(c + 1) * TIME_POINTS]
    }

    /// Flatten time-major: `[w_1', w_2', ..., w_t']` with one `M`-vector per
    /// time point. This is the row layout every model tensor uses.
    pub fn to_row(&self) -> Vec<f64> {
        let mut row = Vec::with_capacity(CHANNELS * TIME_POINTS);
        for t in 0..TIME_POINTS {
            for c in 0..CHANNELS {
                row.push(self.angles[c * TIME_POINTS + t]);
            }
        }
        row
    }
}

/// Stack samples into a `[n, M*t]` batch tensor (time-major rows).
pub fn batch_value(samples: &[GaitSample]) -> Value {
    let mut data = Vec::with_capacity(samples.len() * CHANNELS * TIME_POINTS);
    for s in samples {
        data.extend(s.to_row());
    }
    Value { shape: vec![samples.len(), CHANNELS * TIME_POINTS], data }
}

// ── CSV schema ──────────────────────────────────────────────────────────
//
// UTF-8, comma-separated, dot decimal. Header line, then one row per
// channel: `id,channel,v1,...,v100` with channel in {hip, knee, ankle}.

#[derive(Debug)]
pub struct LoadOutcome {
    pub samples: Vec<GaitSample>,
    /// Sample ids rejected for missing or duplicate channels, with reasons.
    pub rejected: Vec<String>,
}

pub fn load_gait_csv(path: &Path) -> Result<LoadOutcome> {
    let file = std::fs::File::open(path)?;
    let reader = BufReader::new(file);
    // id -> per-channel data, in first-seen order
    let mut order: Vec<String> = Vec::new();
    let mut acc: std::collections::HashMap<String, [Option<Vec<f64>>; CHANNELS]> =
        std::collections::HashMap::new();
    let mut dup: std::collections::HashMap<String, Vec<&'static str>> =
        std::collections::HashMap::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        if lineno == 1 {
            continue; // header
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 + TIME_POINTS {
            return Err(Error::Csv {
                line: lineno,
                detail: format!("expected {} fields, got {}", 2 + TIME_POINTS, fields.len()),
            });
        }
        let id = fields[0].trim().to_string();
        let channel = match fields[1].trim() {
            "hip" => 0,
            "knee" => 1,
            "ankle" => 2,
            other => {
                return Err(Error::Csv {
                    line: lineno,
                    detail: format!("unknown channel tag '{other}'"),
                })
            }
        };
        let mut vals = Vec::with_capacity(TIME_POINTS);
        for (k, cell) in fields[2..].iter().enumerate() {
            let v: f64 = cell.trim().parse().map_err(|_| Error::Csv {
                line: lineno,
                detail: format!("non-numeric cell {} ('{}')", k + 3, cell),
            })?;
            vals.push(v);
        }
        let entry = acc.entry(id.clone()).or_insert_with(|| {
            order.push(id.clone());
            [None, None, None]
        });
        if entry[channel].is_some() {
            dup.entry(id).or_default().push(CHANNEL_NAMES[channel]);
        } else {
            entry[channel] = Some(vals);
        }
    }
    let mut samples = Vec::new();
    let mut rejected = Vec::new();
    for id in order {
        let chans = acc.remove(&id).expect("present");
        if let Some(dups) = dup.get(&id) {
            rejected.push(format!("{id}: duplicate channel(s) {}", dups.join(", ")));
            continue;
        }
        let missing: Vec<&str> = (0..CHANNELS)
            .filter(|c| chans[*c].is_none())
            .map(|c| CHANNEL_NAMES[c])
            .collect();
        if !missing.is_empty() {
            rejected.push(format!("{id}: missing channel(s) {}", missing.join(", ")));
            continue;
        }
        let mut angles = Vec::with_capacity(CHANNELS * TIME_POINTS);
        for c in chans {
            angles.extend(c.expect("checked"));
        }
        samples.push(GaitSample::new(angles)?);
    }
    Ok(LoadOutcome { samples, rejected })
}

pub fn save_gait_csv(path: &Path, samples: &[GaitSample]) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write!(f, "id,channel")?;
    for t in 0..TIME_POINTS {
        write!(f, ",t{t:03}")?;
    }
    writeln!(f)?;
    for (i, s) in samples.iter().enumerate() {
        for (c, name) in CHANNEL_NAMES.iter().enumerate() {
            write!(f, "s{i:05},{name}")?;
            for v in s.channel(c) {
                write!(f, ",{v}")?;
            }
            writeln!(f)?;
        }
    }
    Ok(())
}

// ── synthetic generator ─────────────────────────────────────────────────

/// Generator constants: a shared-frequency harmonic pendulum (the "known
/// physics" part) mapped to three channels by a fixed affine map, plus two
/// fixed higher-frequency harmonics with per-sample random weights (the
/// unmodeled part), plus observation noise.
#[derive(Clone, Copy, Debug)]
pub struct SynthOptions {
    pub residual_std: f64,
    pub noise_std: f64,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions { residual_std: 0.55, noise_std: 0.1 }
    }
}

const PEND_FREQ: f64 = 1.0;
const AMP_LO: f64 = 0.8;
const AMP_HI: f64 = 1.2;
const CH_GAIN: [f64; 3] = [12.0, 18.0, 7.0];
const CH_OFFSET: [f64; 3] = [8.0, 20.0, -5.0];
const RES_FREQS: [f64; 2] = [3.0, 5.0];
const RES_CH_GAIN: [f64; 3] = [6.0, 9.0, 4.0];

pub fn synth_generate(n: usize, seed: u64) -> Vec<GaitSample> {
    synth_generate_opts(n, seed, SynthOptions::default())
}

pub fn synth_generate_opts(n: usize, seed: u64, opts: SynthOptions) -> Vec<GaitSample> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let res_normal = Normal::new(0.0, opts.residual_std.max(f64::MIN_POSITIVE)).expect("std");
    let obs_normal = Normal::new(0.0, opts.noise_std.max(f64::MIN_POSITIVE)).expect("std");
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let amp = rng.gen_range(AMP_LO..AMP_HI);
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        let w1 = if opts.residual_std > 0.0 { res_normal.sample(&mut rng) } else { 0.0 };
        let w2 = if opts.residual_std > 0.0 { res_normal.sample(&mut rng) } else { 0.0 };
        let mut angles = vec![0.0; CHANNELS * TIME_POINTS];
        for t in 0..TIME_POINTS {
            let tt = t as f64 / TIME_POINTS as f64;
            let theta = amp * (std::f64::consts::TAU * PEND_FREQ * tt + phase).sin();
            let residual = w1 * (std::f64::consts::TAU * RES_FREQS[0] * tt).sin()
                + w2 * (std::f64::consts::TAU * RES_FREQS[1] * tt).cos();
            for c in 0..CHANNELS {
                let noise =
                    if opts.noise_std > 0.0 { obs_normal.sample(&mut rng) } else { 0.0 };
                angles[c * TIME_POINTS + t] =
                    CH_OFFSET[c] + CH_GAIN[c] * theta + RES_CH_GAIN[c] * residual + noise;
            }
        }
        out.push(GaitSample { angles });
    }
    out
}

// ── splits and normalization ────────────────────────────────────────────

#[derive(Clone, Debug)]
pub struct DatasetSplit {
    pub train: Vec<GaitSample>,
    pub validation: Vec<GaitSample>,
    pub test: Vec<GaitSample>,
    pub train_idx: Vec<usize>,
    pub validation_idx: Vec<usize>,
    pub test_idx: Vec<usize>,
    pub seed: u64,
}

pub const DEFAULT_SPLIT: (usize, usize, usize) = (400, 100, 344);

/// Shuffle with the given seed and partition into disjoint train /
/// validation / test sets of the requested sizes.
pub fn split_dataset(
    samples: &[GaitSample],
    sizes: (usize, usize, usize),
    seed: u64,
) -> Result<DatasetSplit> {
    let (ntr, nva, nte) = sizes;
    if ntr + nva + nte > samples.len() || ntr == 0 {
        return Err(Error::Config(format!(
            "split {ntr}/{nva}/{nte} needs {} samples, have {}",
            ntr + nva + nte,
            samples.len()
        )));
    }
    let mut idx: Vec<usize> = (0..samples.len()).collect();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    idx.shuffle(&mut rng);
    let train_idx = idx[..ntr].to_vec();
    let validation_idx = idx[ntr..ntr + nva].to_vec();
    let test_idx = idx[ntr + nva..ntr + nva + nte].to_vec();
    let pick = |ids: &[usize]| ids.iter().map(|i| samples[*i].clone()).collect();
    Ok(DatasetSplit {
        train: pick(&train_idx),
        validation: pick(&validation_idx),
        test: pick(&test_idx),
        train_idx,
        validation_idx,
        test_idx,
        seed,
    })
}

/// Per-channel z-scoring statistics, estimated on the training set only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelStats {
    pub mean: [f64; CHANNELS],
    pub std: [f64; CHANNELS],
}

impl ChannelStats {
    pub fn fit(train: &[GaitSample]) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::Config("cannot fit statistics on an empty train set".into()));
        }
        let mut mean = [0.0; CHANNELS];
        let mut std = [0.0; CHANNELS];
        let count = (train.len() * TIME_POINTS) as f64;
        for c in 0..CHANNELS {
            let mut sum = 0.0;
            for s in train {
                sum += s.channel(c).iter().sum::<f64>();
            }
            mean[c] = sum / count;
            let mut sq = 0.0;
            for s in train {
                sq += s.channel(c).iter().map(|x| (x - mean[c]).powi(2)).sum::<f64>();
            }
            let var = sq / count;
            if var < 1e-20 {
                return Err(Error::ZeroVariance { channel: c });
            }
            std[c] = var.sqrt();
        }
        Ok(ChannelStats { mean, std })
    }

    pub fn apply(&self, s: &GaitSample) -> GaitSample {
        let mut out = s.clone();
        for c in 0..CHANNELS {
            for v in out.channel_mut(c) {
                *v = (*v - self.mean[c]) / self.std[c];
            }
        }
        out
    }

    pub fn invert(&self, s: &GaitSample) -> GaitSample {
        let mut out = s.clone();
        for c in 0..CHANNELS {
            for v in out.channel_mut(c) {
                *v = *v * self.std[c] + self.mean[c];
            }
        }
        out
    }

    /// Mean per-channel std, used to convert a normalized-unit MAE into
    /// original units when every channel is weighted equally.
    pub fn mean_std(&self) -> f64 {
        self.std.iter().sum::<f64>() / CHANNELS as f64
    }
}

/// Z-score a whole split with train statistics; returns the statistics for
/// the inverse transform.
pub fn normalize_split(split: &DatasetSplit) -> Result<(DatasetSplit, ChannelStats)> {
    let stats = ChannelStats::fit(&split.train)?;
    let map = |v: &[GaitSample]| v.iter().map(|s| stats.apply(s)).collect();
    Ok((
        DatasetSplit {
            train: map(&split.train),
            validation: map(&split.validation),
            test: map(&split.test),
            train_idx: split.train_idx.clone(),
            validation_idx: split.validation_idx.clone(),
            test_idx: split.test_idx.clone(),
            seed: split.seed,
        },
        stats,
    ))
}

// ── feature corruption ──────────────────────────────────────────────────

/// Corruption spec: a percentage of batch rows gets a percentage of its
/// feature activations zeroed. Counts are exact (round-half-up), not
/// expected values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub pct_samples: f64,
    pub pct_features: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(pct_samples: f64, pct_features: f64, seed: u64) -> Result<Self> {
        for p in [pct_samples, pct_features] {
            if !(p > 0.0 && p <= 100.0) {
                return Err(Error::Config(format!("noise percentage {p} outside (0, 100]")));
            }
        }
        Ok(NoiseSpec { pct_samples, pct_features, seed })
    }
}

/// Audit record of one injection: the multiplicative 0/1 mask plus which
/// rows and how many features per row were zeroed.
#[derive(Clone, Debug)]
pub struct NoiseMask {
    pub mask: Value,
    pub rows: Vec<usize>,
    pub zeros_per_row: usize,
    pub applied: bool,
}

fn round_half_up(x: f64) -> usize {
    x.round() as usize
}

/// Build the exact-count corruption mask for an `[n, f]` activation batch.
pub fn noise_mask(n: usize, f: usize, spec: &NoiseSpec, rng: &mut impl RngCore) -> NoiseMask {
    let n_rows = round_half_up(spec.pct_samples * n as f64 / 100.0).min(n);
    let n_cols = round_half_up(spec.pct_features * f as f64 / 100.0).min(f);
    if n_rows == 0 || n_cols == 0 {
        return NoiseMask {
            mask: Value::full(vec![n, f], 1.0),
            rows: vec![],
            zeros_per_row: 0,
            applied: false,
        };
    }
    let mut row_idx: Vec<usize> = (0..n).collect();
    row_idx.shuffle(rng);
    let mut rows = row_idx[..n_rows].to_vec();
    rows.sort_unstable();
    let mut mask = Value::full(vec![n, f], 1.0);
    for &r in &rows {
        let mut cols: Vec<usize> = (0..f).collect();
        cols.shuffle(rng);
        for &c in &cols[..n_cols] {
            mask.data[r * f + c] = 0.0;
        }
    }
    NoiseMask { mask, rows, zeros_per_row: n_cols, applied: true }
}

/// Zero a fixed fraction of features in a fixed fraction of rows, on the
/// tape (multiplication by a constant 0/1 mask), returning the mask for
/// audit. A selection that rounds to zero rows is a no-op.
pub fn inject_feature_noise(
    s: &mut Session,
    features: Id,
    spec: &NoiseSpec,
    rng: &mut impl RngCore,
) -> Result<(Id, NoiseMask)> {
    let (n, f) = s.tape.value(features).dims2()?;
    let mask = noise_mask(n, f, spec, rng);
    if !mask.applied {
        return Ok((features, mask));
    }
    let m = s.input(mask.mask.clone());
    let corrupted = s.tape.mul(features, m)?;
    Ok((corrupted, mask))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_is_deterministic() {
        let a = synth_generate(10, 99);
        let b = synth_generate(10, 99);
        assert_eq!(a, b);
        let c = synth_generate(10, 100);
        assert_ne!(a, c);
    }

    #[test]
    fn generator_zero_residual_is_pure_pendulum() {
        let opts = SynthOptions { residual_std: 0.0, noise_std: 0.0 };
        let samples = synth_generate_opts(5, 7, opts);
        for s in samples {
            // channels must be affine images of one analytic sinusoid:
            // recover theta from channel 0 and check channels 1, 2
            for t in 0..TIME_POINTS {
                let theta = (s.channel(0)[t] - CH_OFFSET[0]) / CH_GAIN[0];
                for c in 1..CHANNELS {
                    let expect = CH_OFFSET[c] + CH_GAIN[c] * theta;
                    assert!((s.channel(c)[t] - expect).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn generator_channel_statistics_in_band() {
        let samples = synth_generate(1000, 3);
        for c in 0..CHANNELS {
            let mut sum = 0.0;
            let mut sq = 0.0;
            let count = (samples.len() * TIME_POINTS) as f64;
            for s in &samples {
                for v in s.channel(c) {
                    sum += v;
                    sq += v * v;
                }
            }
            let mean = sum / count;
            let var = sq / count - mean * mean;
            // E[theta] = 0 over uniform phase, so E[channel] = offset;
            // variance is dominated by gain^2 E[A^2]/2 plus the residual term.
            assert!((mean - CH_OFFSET[c]).abs() < 1.0, "channel {c} mean {mean}");
            let pend_var = CH_GAIN[c] * CH_GAIN[c] * (AMP_LO * AMP_LO + AMP_LO * AMP_HI + AMP_HI * AMP_HI) / 3.0 / 2.0;
            let res_var = RES_CH_GAIN[c] * RES_CH_GAIN[c] * 0.55 * 0.55; // two harmonics at 1/2 each
            let expect = pend_var + res_var + 0.01;
            assert!(
                (var / expect - 1.0).abs() < 0.15,
                "channel {c} var {var} vs expected {expect}"
            );
        }
    }

    #[test]
    fn csv_round_trip_is_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gait.csv");
        let samples = synth_generate(7, 21);
        save_gait_csv(&path, &samples).unwrap();
        let loaded = load_gait_csv(&path).unwrap();
        assert!(loaded.rejected.is_empty());
        assert_eq!(loaded.samples, samples);
    }

    #[test]
    fn csv_single_sample() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("one.csv");
        let samples = synth_generate(1, 5);
        save_gait_csv(&path, &samples).unwrap();
        let loaded = load_gait_csv(&path).unwrap();
        assert_eq!(loaded.samples.len(), 1);
    }

    #[test]
    fn csv_missing_channel_rejected_with_id() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let samples = synth_generate(2, 5);
        save_gait_csv(&path, &samples).unwrap();
        // drop the ankle row of sample s00000
        let text = std::fs::read_to_string(&path).unwrap();
        let kept: Vec<&str> =
            text.lines().filter(|l| !l.starts_with("s00000,ankle")).collect();
        std::fs::write(&path, kept.join("\n")).unwrap();
        let loaded = load_gait_csv(&path).unwrap();
        assert_eq!(loaded.samples.len(), 1);
        assert_eq!(loaded.rejected.len(), 1);
        assert!(loaded.rejected[0].contains("s00000"));
        assert!(loaded.rejected[0].contains("ankle"));
    }

    #[test]
    fn csv_non_numeric_cell_names_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nan.csv");
        let samples = synth_generate(1, 5);
        save_gait_csv(&path, &samples).unwrap();
        let mut text = std::fs::read_to_string(&path).unwrap();
        text = text.replacen("knee,", "knee,oops_", 1);
        std::fs::write(&path, text).unwrap();
        match load_gait_csv(&path) {
            Err(Error::Csv { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected csv error, got {other:?}"),
        }
    }

    #[test]
    fn split_sizes_and_disjointness() {
        let samples = synth_generate(850, 1);
        let split = split_dataset(&samples, DEFAULT_SPLIT, 17).unwrap();
        assert_eq!(split.train.len(), 400);
        assert_eq!(split.validation.len(), 100);
        assert_eq!(split.test.len(), 344);
        let mut all: Vec<usize> = split
            .train_idx
            .iter()
            .chain(&split.validation_idx)
            .chain(&split.test_idx)
            .copied()
            .collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 844);
    }

    #[test]
    fn normalization_round_trip_and_moments() {
        let samples = synth_generate(120, 2);
        let split = split_dataset(&samples, (80, 20, 20), 3).unwrap();
        let (norm, stats) = normalize_split(&split).unwrap();
        for c in 0..CHANNELS {
            let mut sum = 0.0;
            let mut sq = 0.0;
            let count = (norm.train.len() * TIME_POINTS) as f64;
            for s in &norm.train {
                for v in s.channel(c) {
                    sum += v;
                    sq += v * v;
                }
            }
            let mean = sum / count;
            let var = sq / count - mean * mean;
            assert!(mean.abs() < 1e-10, "channel {c} mean {mean}");
            assert!((var - 1.0).abs() < 1e-10, "channel {c} var {var}");
        }
        for (orig, n) in split.test.iter().zip(&norm.test) {
            let back = stats.invert(n);
            for c in 0..CHANNELS {
                for (a, b) in orig.channel(c).iter().zip(back.channel(c)) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn constant_channel_is_zero_variance_error() {
        let mut samples = synth_generate(10, 2);
        for s in &mut samples {
            s.channel_mut(1).iter_mut().for_each(|v| *v = 4.2);
        }
        let split = split_dataset(&samples, (8, 1, 1), 3).unwrap();
        match normalize_split(&split) {
            Err(Error::ZeroVariance { channel }) => assert_eq!(channel, 1),
            other => panic!("expected zero-variance error, got {other:?}"),
        }
    }

    #[test]
    fn noise_counts_are_exact() {
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        let spec = NoiseSpec::new(50.0, 75.0, 0).unwrap();
        let m = noise_mask(100, 512, &spec, &mut rng);
        assert!(m.applied);
        assert_eq!(m.rows.len(), 50);
        assert_eq!(m.zeros_per_row, 384);
        // verify via mask sums
        for r in 0..100 {
            let zeros =
                m.mask.data[r * 512..(r + 1) * 512].iter().filter(|x| **x == 0.0).count();
            if m.rows.contains(&r) {
                assert_eq!(zeros, 384);
            } else {
                assert_eq!(zeros, 0);
            }
        }
    }

    #[test]
    fn noise_rounds_to_zero_rows_is_noop() {
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        let spec = NoiseSpec::new(5.0, 5.0, 0).unwrap();
        // 5% of 4 rounds to 0 -> no-op
        let store = crate::autodiff::ParamStore::new();
        let mut s = Session::new(&store);
        let x = s.input(Value::full(vec![4, 10], 2.0));
        let (y, mask) = inject_feature_noise(&mut s, x, &spec, &mut rng).unwrap();
        assert!(!mask.applied);
        assert_eq!(y, x);
    }

    #[test]
    fn noise_spec_validation() {
        assert!(NoiseSpec::new(0.0, 5.0, 0).is_err());
        assert!(NoiseSpec::new(5.0, 101.0, 0).is_err());
        assert!(NoiseSpec::new(100.0, 100.0, 0).is_ok());
    }

    #[test]
    fn batch_row_layout_is_time_major() {
        let samples = synth_generate(2, 11);
        let b = batch_value(&samples);
        assert_eq!(b.shape, vec![2, CHANNELS * TIME_POINTS]);
        // row 0, time 5, channel 2 lives at 5 * CHANNELS + 2
        assert_eq!(b.data[5 * CHANNELS + 2], samples[0].channel(2)[5]);
    }
}
