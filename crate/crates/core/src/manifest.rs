//! Dataset manifests: a JSON index tying a synth spec to its RAS1 files
//! plus a content checksum, so training runs can pin exactly what they saw.

use crate::synth::SynthSpec;
use crate::{ras1, CoreError, Mask, Raster, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub spec: SynthSpec,
    pub images: Vec<String>,
    pub masks: Vec<String>,
    /// SHA-256 over every image and mask payload, in manifest order.
    pub checksum: String,
}

/// SHA-256 over dims and little-endian payloads of all pairs, in order.
pub fn dataset_checksum(pairs: &[(Raster, Mask)]) -> String {
    let mut hasher = Sha256::new();
    for (r, m) in pairs {
        hasher.update((r.height as u32).to_le_bytes());
        hasher.update((r.width as u32).to_le_bytes());
        hasher.update((r.channels as u32).to_le_bytes());
        for v in &r.data {
            hasher.update(v.to_le_bytes());
        }
        hasher.update(&m.labels);
    }
    hex(&hasher.finalize())
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes RAS1 pairs plus `manifest.json` into `dir`.
pub fn write_dataset(dir: &Path, spec: &SynthSpec, pairs: &[(Raster, Mask)]) -> Result<DatasetManifest> {
    std::fs::create_dir_all(dir)?;
    let mut images = Vec::with_capacity(pairs.len());
    let mut masks = Vec::with_capacity(pairs.len());
    for (i, (r, m)) in pairs.iter().enumerate() {
        let img = format!("img_{i:05}.ras");
        let msk = format!("msk_{i:05}.ras");
        ras1::write_raster(&dir.join(&img), r)?;
        ras1::write_mask(&dir.join(&msk), m)?;
        images.push(img);
        masks.push(msk);
    }
    let manifest = DatasetManifest {
        spec: *spec,
        images,
        masks,
        checksum: dataset_checksum(pairs),
    };
    let json = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(dir.join("manifest.json"), json)?;
    Ok(manifest)
}

pub fn read_manifest(path: &Path) -> Result<(DatasetManifest, PathBuf)> {
    let (file, dir) = if path.is_dir() {
        (path.join("manifest.json"), path.to_path_buf())
    } else {
        let dir = path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."));
        (path.to_path_buf(), dir)
    };
    let text = std::fs::read_to_string(&file)?;
    let manifest: DatasetManifest = serde_json::from_str(&text)?;
    Ok((manifest, dir))
}

/// Loads all pairs listed by a manifest and verifies the checksum.
pub fn load_dataset(path: &Path) -> Result<(DatasetManifest, Vec<(Raster, Mask)>)> {
    let (manifest, dir) = read_manifest(path)?;
    if manifest.images.len() != manifest.masks.len() {
        return Err(CoreError::Manifest("image/mask count mismatch".into()));
    }
    let mut pairs = Vec::with_capacity(manifest.images.len());
    for (img, msk) in manifest.images.iter().zip(&manifest.masks) {
        let r = ras1::read_raster(&dir.join(img))?;
        let m = ras1::read_mask(&dir.join(msk))?;
        pairs.push((r, m));
    }
    let sum = dataset_checksum(&pairs);
    if sum != manifest.checksum {
        return Err(CoreError::Manifest(format!(
            "checksum mismatch: manifest {} vs data {}",
            manifest.checksum, sum
        )));
    }
    Ok((manifest, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{self, SynthSpec, SynthTask};

    #[test]
    fn write_then_load_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let spec = SynthSpec {
            task: SynthTask::FireLike,
            count: 3,
            height: 16,
            width: 16,
            channels: 1,
            seed: 42,
            positive_fraction_target: 0.05,
        };
        let pairs = synth::generate(&spec).unwrap();
        let manifest = write_dataset(dir.path(), &spec, &pairs).unwrap();
        let (loaded, back) = load_dataset(dir.path()).unwrap();
        assert_eq!(loaded.checksum, manifest.checksum);
        assert_eq!(back.len(), pairs.len());
        for ((a, am), (b, bm)) in pairs.iter().zip(&back) {
            assert_eq!(a.data, b.data);
            assert_eq!(am.labels, bm.labels);
        }
    }

    #[test]
    fn checksum_detects_tampering() {
        let dir = tempfile::tempdir().unwrap();
        let spec = SynthSpec {
            task: SynthTask::FireLike,
            count: 1,
            height: 8,
            width: 8,
            channels: 1,
            seed: 1,
            positive_fraction_target: 0.05,
        };
        let pairs = synth::generate(&spec).unwrap();
        write_dataset(dir.path(), &spec, &pairs).unwrap();
        // overwrite one image with different contents
        let mut other = pairs[0].0.clone();
        other.data[0] += 0.5;
        crate::ras1::write_raster(&dir.path().join("img_00000.ras"), &other).unwrap();
        assert!(load_dataset(dir.path()).is_err());
    }
}
