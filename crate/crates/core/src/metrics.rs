//! Rate, distortion, and segmentation-quality metrics.

use crate::{CoreError, Mask, Raster, Result};

/// One point of a rate-distortion-task sweep: the unit every report is
/// built from.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RdPoint {
    /// Bits per spatial pixel (channel count excluded by convention).
    pub bpp: f64,
    /// Peak signal-to-noise ratio in dB; +infinity for a perfect match.
    pub psnr_db: f64,
    /// F1 of the positive class.
    pub f1_pos: f64,
    /// Unweighted mean of per-class F1.
    pub f1_macro: f64,
}

/// 10·log10(peak²/MSE) over all H·W·C samples. Returns +infinity when the
/// inputs match exactly.
pub fn psnr(reference: &Raster, reconstruction: &Raster, peak: f64) -> Result<f64> {
    if reference.height != reconstruction.height
        || reference.width != reconstruction.width
        || reference.channels != reconstruction.channels
    {
        return Err(CoreError::DimMismatch(format!(
            "{}x{}x{} vs {}x{}x{}",
            reference.height,
            reference.width,
            reference.channels,
            reconstruction.height,
            reconstruction.width,
            reconstruction.channels
        )));
    }
    assert!(peak > 0.0, "psnr peak must be positive");
    let mut se = 0.0f64;
    for (a, b) in reference.data.iter().zip(&reconstruction.data) {
        let d = *a as f64 - *b as f64;
        se += d * d;
    }
    let mse = se / reference.data.len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak * peak / mse).log10())
}

/// Mean squared error over all samples, in f64.
pub fn mse(reference: &Raster, reconstruction: &Raster) -> Result<f64> {
    if reference.data.len() != reconstruction.data.len() {
        return Err(CoreError::DimMismatch("mse inputs".into()));
    }
    let mut se = 0.0f64;
    for (a, b) in reference.data.iter().zip(&reconstruction.data) {
        let d = *a as f64 - *b as f64;
        se += d * d;
    }
    Ok(se / reference.data.len() as f64)
}

/// Compressed size divided by spatial pixel count. Channels are deliberately
/// excluded so codecs are compared at equal spatial resolution.
pub fn bits_per_pixel(bitstream_bits: u64, height: usize, width: usize) -> f64 {
    assert!(height > 0 && width > 0);
    bitstream_bits as f64 / (height * width) as f64
}

/// (F1 of the positive class, macro F1). A class absent from both the
/// prediction and the truth contributes F1 = 1 to the macro mean so
/// all-background tiles stay well-defined.
pub fn f1_scores(predicted: &Mask, truth: &Mask) -> Result<(f64, f64)> {
    if predicted.height != truth.height || predicted.width != truth.width {
        return Err(CoreError::DimMismatch(format!(
            "{}x{} vs {}x{}",
            predicted.height, predicted.width, truth.height, truth.width
        )));
    }
    let (mut tp, mut fp, mut fn_, mut tn) = (0u64, 0u64, 0u64, 0u64);
    for (p, t) in predicted.labels.iter().zip(&truth.labels) {
        match (p, t) {
            (1, 1) => tp += 1,
            (1, 0) => fp += 1,
            (0, 1) => fn_ += 1,
            _ => tn += 1,
        }
    }
    let f1_pos = class_f1(tp, fp, fn_);
    let f1_neg = class_f1(tn, fn_, fp);
    Ok((f1_pos, 0.5 * (f1_pos + f1_neg)))
}

fn class_f1(tp: u64, fp: u64, fn_: u64) -> f64 {
    if tp + fp + fn_ == 0 {
        // class absent everywhere
        return 1.0;
    }
    2.0 * tp as f64 / (2.0 * tp as f64 + fp as f64 + fn_ as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Raster;

    fn raster_from(v: Vec<f32>) -> Raster {
        let n = v.len();
        Raster::new(1, n, 1, v).unwrap()
    }

    #[test]
    fn psnr_mse_001_is_20db() {
        // constant error of 0.1 -> MSE 0.01 (up to f32 rounding of 0.1)
        let a = raster_from(vec![0.0; 100]);
        let b = raster_from(vec![0.1; 100]);
        let db = psnr(&a, &b, 1.0).unwrap();
        assert!((db - 20.0).abs() < 1e-5, "got {db}");
    }

    #[test]
    fn psnr_identical_is_infinite() {
        let a = raster_from(vec![0.3, 0.7, 0.1]);
        assert_eq!(psnr(&a, &a, 1.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn psnr_tiny_mse_is_70db() {
        // MSE 1e-7, same magnitude range as published joint-training tables
        let err = (1e-7f64).sqrt() as f32;
        let a = raster_from(vec![0.5; 64]);
        let b = raster_from(vec![0.5 + err; 64]);
        let db = psnr(&a, &b, 1.0).unwrap();
        assert!((db - 70.0).abs() < 1e-3, "got {db}");
    }

    #[test]
    fn psnr_dim_mismatch_errors() {
        let a = raster_from(vec![0.0; 4]);
        let b = raster_from(vec![0.0; 5]);
        assert!(psnr(&a, &b, 1.0).is_err());
    }

    #[test]
    fn bpp_examples() {
        assert_eq!(bits_per_pixel(1024, 32, 32), 1.0);
        assert_eq!(bits_per_pixel(0, 32, 32), 0.0);
        let v = bits_per_pixel(10_032, 128, 128);
        assert!((v - 0.6123).abs() < 1e-4, "got {v}");
    }

    #[test]
    fn f1_perfect_prediction() {
        let t = Mask::new(1, 4, vec![1, 0, 1, 0]).unwrap();
        let (pos, mac) = f1_scores(&t, &t).unwrap();
        assert_eq!((pos, mac), (1.0, 1.0));
    }

    #[test]
    fn f1_two_thirds() {
        // TP=2, FP=1, FN=1 -> f1_pos = 2/3
        let p = Mask::new(1, 5, vec![1, 1, 1, 0, 0]).unwrap();
        let t = Mask::new(1, 5, vec![1, 1, 0, 1, 0]).unwrap();
        let (pos, _) = f1_scores(&p, &t).unwrap();
        assert!((pos - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn f1_all_negative_prediction() {
        let p = Mask::new(1, 4, vec![0, 0, 0, 0]).unwrap();
        let t = Mask::new(1, 4, vec![1, 0, 0, 0]).unwrap();
        let (pos, _) = f1_scores(&p, &t).unwrap();
        assert_eq!(pos, 0.0);
    }

    #[test]
    fn f1_absent_class_counts_as_one() {
        let z = Mask::new(1, 4, vec![0, 0, 0, 0]).unwrap();
        let (pos, mac) = f1_scores(&z, &z).unwrap();
        assert_eq!(pos, 1.0);
        assert_eq!(mac, 1.0);
    }
}
