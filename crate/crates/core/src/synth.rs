//! Deterministic synthetic dataset generators.
//!
//! Three families mimic the statistical character of the bench's tasks:
//! sparse hot blobs on a dim background (thermal point sources), smooth
//! correlated fields (cloud cover), and multi-channel scenes with
//! rectangular structures and engineered spectral redundancy (built-up
//! areas). Generation is a pure function of `(spec, image index)` via a
//! counter-keyed RNG, so images can be produced in any order or in
//! parallel.

use crate::{CoreError, Mask, Raster, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthTask {
    FireLike,
    CloudLike,
    BuildingLike,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub task: SynthTask,
    pub count: usize,
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    pub seed: u64,
    pub positive_fraction_target: f64,
}

impl SynthSpec {
    /// Default shapes for the three tasks: 32×32 single-channel patches,
    /// 256×256 single-channel scenes, 128×128 10-channel scenes.
    pub fn preset(task: SynthTask) -> Self {
        match task {
            SynthTask::FireLike => Self {
                task,
                count: 571,
                height: 32,
                width: 32,
                channels: 1,
                seed: 0,
                positive_fraction_target: 0.05,
            },
            SynthTask::CloudLike => Self {
                task,
                count: 528,
                height: 256,
                width: 256,
                channels: 1,
                seed: 0,
                positive_fraction_target: 0.5,
            },
            SynthTask::BuildingLike => Self {
                task,
                count: 64,
                height: 128,
                width: 128,
                channels: 10,
                seed: 0,
                positive_fraction_target: 0.15,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 || self.height == 0 || self.width == 0 {
            return Err(CoreError::InvalidSpec("zero count or dims".into()));
        }
        match self.task {
            SynthTask::FireLike | SynthTask::CloudLike => {
                if self.channels != 1 {
                    return Err(CoreError::InvalidSpec(
                        "fire_like/cloud_like require channels == 1".into(),
                    ));
                }
            }
            SynthTask::BuildingLike => {
                if self.channels < 3 {
                    return Err(CoreError::InvalidSpec(
                        "building_like requires channels >= 3".into(),
                    ));
                }
            }
        }
        if !(0.0..=1.0).contains(&self.positive_fraction_target) {
            return Err(CoreError::InvalidSpec(
                "positive_fraction_target outside [0,1]".into(),
            ));
        }
        Ok(())
    }
}

/// Tuning knobs for the hot-blob generator.
#[derive(Debug, Clone, Copy)]
pub struct FireParams {
    pub amplitude_lo: f64,
    pub amplitude_hi: f64,
    pub max_blobs: usize,
    /// Blob contribution above this marks a positive pixel.
    pub threshold: f64,
    pub background_amplitude: f64,
}

impl Default for FireParams {
    fn default() -> Self {
        Self {
            amplitude_lo: 0.55,
            amplitude_hi: 0.9,
            max_blobs: 3,
            threshold: 0.25,
            background_amplitude: 0.05,
        }
    }
}

/// Tuning knobs for the rectangle generator.
#[derive(Debug, Clone, Copy)]
pub struct BuildingParams {
    pub min_rects: usize,
    pub max_rects: usize,
    pub boost_lo: f64,
    pub boost_hi: f64,
    pub channel_noise: f64,
}

impl Default for BuildingParams {
    fn default() -> Self {
        Self {
            min_rects: 3,
            max_rects: 8,
            boost_lo: 0.25,
            boost_hi: 0.45,
            channel_noise: 0.02,
        }
    }
}

pub fn generate(spec: &SynthSpec) -> Result<Vec<(Raster, Mask)>> {
    spec.validate()?;
    match spec.task {
        SynthTask::FireLike => gen_fire_like(spec),
        SynthTask::CloudLike => gen_cloud_like(spec),
        SynthTask::BuildingLike => gen_building_like(spec),
    }
}

pub fn gen_fire_like(spec: &SynthSpec) -> Result<Vec<(Raster, Mask)>> {
    gen_fire_like_with(spec, &FireParams::default())
}

pub fn gen_fire_like_with(spec: &SynthSpec, params: &FireParams) -> Result<Vec<(Raster, Mask)>> {
    spec.validate()?;
    (0..spec.count)
        .map(|i| fire_image(spec, params, i as u64))
        .collect()
}

fn fire_image(spec: &SynthSpec, p: &FireParams, index: u64) -> Result<(Raster, Mask)> {
    let mut rng = image_rng(spec.seed, index, 0x11);
    let (h, w) = (spec.height, spec.width);
    let mut raster = Raster::zeros(h, w, 1);
    let mut mask = Mask::zeros(h, w);

    // dim smooth background from a couple of low-frequency waves
    let fx = rng.gen_range(0.5..1.5);
    let fy = rng.gen_range(0.5..1.5);
    let phase_x = rng.gen_range(0.0..std::f64::consts::TAU);
    let phase_y = rng.gen_range(0.0..std::f64::consts::TAU);
    let base = rng.gen_range(0.06..0.12);

    let n_blobs = if p.amplitude_hi <= 0.0 {
        0
    } else {
        rng.gen_range(1..=p.max_blobs.max(1))
    };
    // blob scale calibrated so the expected positive area tracks the target
    let expected = (p.max_blobs.max(1) as f64 + 1.0) / 2.0;
    let sigma_base = (spec.positive_fraction_target * (h * w) as f64 / (expected * 6.5))
        .sqrt()
        .max(0.8);
    let blobs: Vec<(f64, f64, f64, f64)> = (0..n_blobs)
        .map(|_| {
            let cy = rng.gen_range(0.15 * h as f64..0.85 * h as f64);
            let cx = rng.gen_range(0.15 * w as f64..0.85 * w as f64);
            let sigma = sigma_base * rng.gen_range(0.7..1.3);
            let amp = if p.amplitude_hi <= p.amplitude_lo {
                p.amplitude_hi
            } else {
                rng.gen_range(p.amplitude_lo..p.amplitude_hi)
            };
            (cy, cx, sigma, amp)
        })
        .collect();

    for row in 0..h {
        for col in 0..w {
            let bg = base
                + p.background_amplitude
                    * ((std::f64::consts::TAU * fy * row as f64 / h as f64 + phase_y).sin()
                        * (std::f64::consts::TAU * fx * col as f64 / w as f64 + phase_x).sin());
            let mut blob = 0.0;
            for &(cy, cx, sigma, amp) in &blobs {
                let d2 = (row as f64 - cy).powi(2) + (col as f64 - cx).powi(2);
                blob += amp * (-d2 / (2.0 * sigma * sigma)).exp();
            }
            raster.set(row, col, 0, (bg + blob).clamp(0.0, 1.0) as f32);
            if blob > p.threshold {
                mask.labels[row * w + col] = 1;
            }
        }
    }
    Ok((raster, mask))
}

pub fn gen_cloud_like(spec: &SynthSpec) -> Result<Vec<(Raster, Mask)>> {
    spec.validate()?;
    (0..spec.count)
        .map(|i| cloud_image(spec, i as u64))
        .collect()
}

fn cloud_image(spec: &SynthSpec, index: u64) -> Result<(Raster, Mask)> {
    let mut rng = image_rng(spec.seed, index, 0x22);
    let (h, w) = (spec.height, spec.width);
    let mut field: Vec<f64> = (0..h * w).map(|_| rng.gen_range(-1.0..1.0)).collect();
    // band-limit: separable Gaussian low-pass
    let sigma = (spec.height.min(spec.width) as f64 / 24.0).max(2.0);
    gaussian_blur(&mut field, h, w, sigma);

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in &field {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let span = (hi - lo).max(1e-12);
    for v in &mut field {
        *v = (*v - lo) / span;
    }

    // per-image quantile threshold hits the requested positive fraction
    let mut sorted = field.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = (((1.0 - spec.positive_fraction_target) * (h * w) as f64) as usize).min(h * w - 1);
    let tau = sorted[k];

    let mut raster = Raster::zeros(h, w, 1);
    let mut mask = Mask::zeros(h, w);
    for i in 0..h * w {
        raster.data[i] = field[i] as f32;
        mask.labels[i] = u8::from(field[i] > tau);
    }
    Ok((raster, mask))
}

pub fn gen_building_like(spec: &SynthSpec) -> Result<Vec<(Raster, Mask)>> {
    gen_building_like_with(spec, &BuildingParams::default())
}

pub fn gen_building_like_with(
    spec: &SynthSpec,
    params: &BuildingParams,
) -> Result<Vec<(Raster, Mask)>> {
    spec.validate()?;
    (0..spec.count)
        .map(|i| building_image(spec, params, i as u64))
        .collect()
}

fn building_image(spec: &SynthSpec, p: &BuildingParams, index: u64) -> Result<(Raster, Mask)> {
    let mut rng = image_rng(spec.seed, index, 0x33);
    let (h, w, c) = (spec.height, spec.width, spec.channels);

    // shared structure: textured background plus rectangular footprints
    let mut structure: Vec<f64> = (0..h * w).map(|_| rng.gen_range(-1.0..1.0)).collect();
    gaussian_blur(&mut structure, h, w, 1.5);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in &structure {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let span = (hi - lo).max(1e-12);
    for v in &mut structure {
        *v = 0.2 + 0.3 * (*v - lo) / span; // background in [0.2, 0.5]
    }

    let mut mask = Mask::zeros(h, w);
    let n_rects = if p.max_rects == 0 {
        0
    } else {
        rng.gen_range(p.min_rects.min(p.max_rects)..=p.max_rects)
    };
    for _ in 0..n_rects {
        let rh = rng.gen_range(3..=(h / 4).max(4));
        let rw = rng.gen_range(3..=(w / 4).max(4));
        let r0 = rng.gen_range(0..h.saturating_sub(rh).max(1));
        let c0 = rng.gen_range(0..w.saturating_sub(rw).max(1));
        let boost = rng.gen_range(p.boost_lo..p.boost_hi);
        for row in r0..(r0 + rh).min(h) {
            for col in c0..(c0 + rw).min(w) {
                structure[row * w + col] = (structure[row * w + col] + boost).min(1.0);
                mask.labels[row * w + col] = 1;
            }
        }
    }

    // channels share the structure through per-channel gains; the small
    // independent noise keeps them distinct without breaking correlation
    let gains: Vec<f64> = (0..c).map(|_| rng.gen_range(0.55..0.95)).collect();
    let mut raster = Raster::zeros(h, w, c);
    for px in 0..h * w {
        for (ch, &g) in gains.iter().enumerate() {
            let noise = rng.gen_range(-p.channel_noise..p.channel_noise);
            raster.data[px * c + ch] = ((structure[px] * g + noise).clamp(0.0, 1.0)) as f32;
        }
    }
    Ok((raster, mask))
}

/// Separable Gaussian low-pass with reflected boundaries.
fn gaussian_blur(plane: &mut [f64], h: usize, w: usize, sigma: f64) {
    let radius = (3.0 * sigma).ceil() as isize;
    let kernel: Vec<f64> = (-radius..=radius)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let norm: f64 = kernel.iter().sum();
    let kernel: Vec<f64> = kernel.iter().map(|k| k / norm).collect();

    let reflect = |i: isize, n: isize| -> usize {
        let mut i = i;
        while i < 0 || i >= n {
            if i < 0 {
                i = -i;
            }
            if i >= n {
                i = 2 * (n - 1) - i;
            }
        }
        i as usize
    };

    let mut tmp = vec![0.0; h * w];
    for row in 0..h {
        for col in 0..w {
            let mut acc = 0.0;
            for (ki, k) in kernel.iter().enumerate() {
                let src = reflect(col as isize + ki as isize - radius, w as isize);
                acc += k * plane[row * w + src];
            }
            tmp[row * w + col] = acc;
        }
    }
    for col in 0..w {
        for row in 0..h {
            let mut acc = 0.0;
            for (ki, k) in kernel.iter().enumerate() {
                let src = reflect(row as isize + ki as isize - radius, h as isize);
                acc += k * tmp[src * w + col];
            }
            plane[row * w + col] = acc;
        }
    }
}

/// Counter-based RNG: each (seed, image index, stream) triple yields an
/// independent deterministic stream, so generation order never matters.
fn image_rng(seed: u64, index: u64, stream: u64) -> ChaCha8Rng {
    let mut key = seed;
    for salt in [index, stream] {
        key ^= salt.wrapping_add(0x9e3779b97f4a7c15).wrapping_add(key << 6) ^ (key >> 2);
        key = key.wrapping_mul(0xbf58476d1ce4e5b9);
        key ^= key >> 27;
    }
    ChaCha8Rng::seed_from_u64(key)
}
