//! Image and mask containers plus dataset-level normalization and patching.

use crate::{CoreError, Result};

/// A row-major H×W×C floating-point image. Values are radiance-like before
/// [`normalize_global_max`] and dimensionless in [0,1] afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    /// Row-major, channel-minor: index = (row * width + col) * channels + c.
    pub data: Vec<f32>,
}

impl Raster {
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f32>) -> Result<Self> {
        if height == 0 || width == 0 || channels == 0 {
            return Err(CoreError::InvalidRaster("zero dimension".into()));
        }
        if data.len() != height * width * channels {
            return Err(CoreError::InvalidRaster(format!(
                "data length {} != {}x{}x{}",
                data.len(),
                height,
                width,
                channels
            )));
        }
        Ok(Self {
            height,
            width,
            channels,
            data,
        })
    }

    pub fn zeros(height: usize, width: usize, channels: usize) -> Self {
        Self {
            height,
            width,
            channels,
            data: vec![0.0; height * width * channels],
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, c: usize) -> f32 {
        self.data[(row * self.width + col) * self.channels + c]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, c: usize, v: f32) {
        self.data[(row * self.width + col) * self.channels + c] = v;
    }

    pub fn num_samples(&self) -> usize {
        self.data.len()
    }

    /// Extracts one channel as a dense H×W plane in f64.
    pub fn channel_plane(&self, c: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.height * self.width);
        for px in 0..self.height * self.width {
            out.push(self.data[px * self.channels + c] as f64);
        }
        out
    }

    /// Writes a dense H×W plane back into one channel.
    pub fn set_channel_plane(&mut self, c: usize, plane: &[f64]) {
        assert_eq!(plane.len(), self.height * self.width);
        for (px, &v) in plane.iter().enumerate() {
            self.data[px * self.channels + c] = v as f32;
        }
    }
}

/// Binary segmentation labels paired with a raster of the same spatial dims.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    pub height: usize,
    pub width: usize,
    /// One byte per pixel, values restricted to {0, 1}.
    pub labels: Vec<u8>,
}

impl Mask {
    pub fn new(height: usize, width: usize, labels: Vec<u8>) -> Result<Self> {
        if labels.len() != height * width {
            return Err(CoreError::InvalidRaster(format!(
                "label length {} != {}x{}",
                labels.len(),
                height,
                width
            )));
        }
        if labels.iter().any(|&v| v > 1) {
            return Err(CoreError::InvalidRaster("mask labels must be 0 or 1".into()));
        }
        Ok(Self {
            height,
            width,
            labels,
        })
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            labels: vec![0; height * width],
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.labels[row * self.width + col]
    }

    pub fn positive_fraction(&self) -> f64 {
        let pos: usize = self.labels.iter().map(|&v| v as usize).sum();
        pos as f64 / self.labels.len() as f64
    }
}

/// Divides every sample in the dataset by the dataset-wide maximum so the
/// output lies in [0,1] with max exactly 1.0. Returns the scale used, which
/// inverts the mapping. An all-zero dataset is returned unchanged with
/// scale 1.0.
pub fn normalize_global_max(dataset: &[Raster]) -> Result<(Vec<Raster>, f64)> {
    if dataset.is_empty() {
        return Err(CoreError::EmptyDataset);
    }
    let mut global_max = 0.0f32;
    for r in dataset {
        for &v in &r.data {
            if v > global_max {
                global_max = v;
            }
        }
    }
    if global_max <= 0.0 {
        return Ok((dataset.to_vec(), 1.0));
    }
    let out = dataset
        .iter()
        .map(|r| {
            let mut r2 = r.clone();
            for v in &mut r2.data {
                *v /= global_max;
            }
            r2
        })
        .collect();
    Ok((out, global_max as f64))
}

/// Cuts size×size windows around the given centers. Windows whose center sits
/// too close to the border are clamped so they stay in bounds; no pixels are
/// invented.
pub fn crop_patches(
    raster: &Raster,
    mask: &Mask,
    size: usize,
    centers: &[(usize, usize)],
) -> Result<Vec<(Raster, Mask)>> {
    if size > raster.height || size > raster.width {
        return Err(CoreError::PatchTooLarge {
            patch: size,
            height: raster.height,
            width: raster.width,
        });
    }
    if raster.height != mask.height || raster.width != mask.width {
        return Err(CoreError::DimMismatch(format!(
            "raster {}x{} vs mask {}x{}",
            raster.height, raster.width, mask.height, mask.width
        )));
    }
    let mut out = Vec::with_capacity(centers.len());
    for &(cr, cc) in centers {
        if cr >= raster.height || cc >= raster.width {
            return Err(CoreError::DimMismatch(format!(
                "center ({cr},{cc}) outside {}x{}",
                raster.height, raster.width
            )));
        }
        let half = size / 2;
        let r0 = cr.saturating_sub(half).min(raster.height - size);
        let c0 = cc.saturating_sub(half).min(raster.width - size);
        let mut pr = Raster::zeros(size, size, raster.channels);
        let mut pm = Mask::zeros(size, size);
        for dr in 0..size {
            for dc in 0..size {
                for ch in 0..raster.channels {
                    pr.set(dr, dc, ch, raster.get(r0 + dr, c0 + dc, ch));
                }
                pm.labels[dr * size + dc] = mask.get(r0 + dr, c0 + dc);
            }
        }
        out.push((pr, pm));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_divides_by_global_max() {
        let a = Raster::new(1, 2, 1, vec![100.0, 400.0]).unwrap();
        let b = Raster::new(1, 2, 1, vec![50.0, 0.0]).unwrap();
        let (out, scale) = normalize_global_max(&[a, b]).unwrap();
        assert_eq!(scale, 400.0);
        assert_eq!(out[0].data, vec![0.25, 1.0]);
        assert_eq!(out[1].data, vec![0.125, 0.0]);
    }

    #[test]
    fn normalize_all_zero_is_identity() {
        let a = Raster::zeros(2, 2, 1);
        let (out, scale) = normalize_global_max(&[a.clone()]).unwrap();
        assert_eq!(scale, 1.0);
        assert_eq!(out[0], a);
    }

    #[test]
    fn normalize_unit_max_is_identity() {
        let a = Raster::new(1, 3, 1, vec![0.5, 1.0, 0.25]).unwrap();
        let (out, scale) = normalize_global_max(&[a.clone()]).unwrap();
        assert_eq!(scale, 1.0);
        assert_eq!(out[0], a);
    }

    #[test]
    fn normalize_empty_errors() {
        assert!(matches!(
            normalize_global_max(&[]),
            Err(CoreError::EmptyDataset)
        ));
    }

    #[test]
    fn normalize_is_idempotent() {
        let a = Raster::new(1, 3, 1, vec![3.0, 12.0, 6.0]).unwrap();
        let (once, _) = normalize_global_max(&[a]).unwrap();
        let (twice, scale2) = normalize_global_max(&once).unwrap();
        assert_eq!(scale2, 1.0);
        assert_eq!(once, twice);
    }

    #[test]
    fn crop_exact_fit() {
        let mut r = Raster::zeros(64, 64, 1);
        r.set(0, 0, 0, 7.0);
        let m = Mask::zeros(64, 64);
        let patches = crop_patches(&r, &m, 32, &[(16, 16)]).unwrap();
        assert_eq!(patches.len(), 1);
        let (p, _) = &patches[0];
        assert_eq!((p.height, p.width), (32, 32));
        // window is rows 0..31, cols 0..31, so the corner marker survives
        assert_eq!(p.get(0, 0, 0), 7.0);
    }

    #[test]
    fn crop_clamps_at_border() {
        let mut r = Raster::zeros(64, 64, 1);
        r.set(31, 31, 0, 9.0);
        let m = Mask::zeros(64, 64);
        let patches = crop_patches(&r, &m, 32, &[(0, 0)]).unwrap();
        let (p, _) = &patches[0];
        // clamped window covers rows 0..31
        assert_eq!(p.get(31, 31, 0), 9.0);
    }

    #[test]
    fn crop_too_large_errors() {
        let r = Raster::zeros(64, 64, 1);
        let m = Mask::zeros(64, 64);
        assert!(matches!(
            crop_patches(&r, &m, 128, &[(0, 0)]),
            Err(CoreError::PatchTooLarge { .. })
        ));
    }

    #[test]
    fn mask_rejects_nonbinary() {
        assert!(Mask::new(1, 2, vec![0, 2]).is_err());
    }
}
