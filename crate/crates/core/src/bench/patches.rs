use rand::Rng;
use serde::{Deserialize, Serialize};

use super::pgm::GrayImage;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::seeded_rng;

/// Random square patches; overlapping placements are always allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchSpec {
    pub patch_size: usize,
    pub patch_count: usize,
    pub seed: u64,
}

/// Samples `patch_count` patches with top-left corners drawn uniformly (with
/// replacement) over all valid placements.
///
/// Each patch becomes one column of length `patch_size²`, read column-major
/// inside the patch, with intensities scaled to `[0, 1]`.
pub fn extract_patches(img: &GrayImage, spec: &PatchSpec) -> Result<DenseMatrix> {
    let s = spec.patch_size;
    if s == 0 || spec.patch_count == 0 {
        return Err(Error::invalid("patch size and patch count must be positive"));
    }
    if img.width < s || img.height < s {
        return Err(Error::invalid(format!(
            "{}x{} image is smaller than a {s}x{s} patch",
            img.width, img.height
        )));
    }
    let mut rng = seeded_rng(spec.seed);
    let mut data = Vec::with_capacity(s * s * spec.patch_count);
    for _ in 0..spec.patch_count {
        let top = rng.gen_range(0..=img.height - s);
        let left = rng.gen_range(0..=img.width - s);
        for c in 0..s {
            for r in 0..s {
                data.push(img.intensity(top + r, left + c));
            }
        }
    }
    DenseMatrix::from_col_major(s * s, spec.patch_count, data)
}
