//! IDX dataset files (the classic big-endian magic/dims/payload layout).
//!
//! Images and labels live in separate files, as the format prescribes:
//! images use magic `0x00000803` (u8, 3 dims), labels `0x00000801`
//! (u8, 1 dim).

use std::fs;
use std::path::Path;

use super::{Image, LabeledDataset, Space};
use crate::{Error, Result};

const IMAGES_MAGIC: u32 = 0x0000_0803;
const LABELS_MAGIC: u32 = 0x0000_0801;

/// Load an images/labels IDX file pair into a dataset.
///
/// `class_count` is taken as `max(label) + 1`.
pub fn load_idx(images_path: &Path, labels_path: &Path) -> Result<LabeledDataset> {
    let img_bytes = fs::read(images_path)?;
    let (dims, img_payload) = parse_idx_header(&img_bytes, IMAGES_MAGIC, 3)?;
    let (n, h, w) = (dims[0], dims[1], dims[2]);
    if img_payload.len() != n * h * w {
        return Err(Error::parse(
            img_bytes.len(),
            format!("truncated image payload: expected {} bytes", n * h * w),
        ));
    }

    let lbl_bytes = fs::read(labels_path)?;
    let (ldims, lbl_payload) = parse_idx_header(&lbl_bytes, LABELS_MAGIC, 1)?;
    if ldims[0] != n {
        return Err(Error::config(format!(
            "label count {} does not match image count {n}",
            ldims[0]
        )));
    }
    if lbl_payload.len() != n {
        return Err(Error::parse(
            lbl_bytes.len(),
            format!("truncated label payload: expected {n} bytes"),
        ));
    }

    let images = (0..n)
        .map(|i| {
            let start = i * h * w;
            let values = img_payload[start..start + h * w]
                .iter()
                .map(|&b| b as f64 / 255.0)
                .collect();
            Image::from_vec(h, w, values, Space::Unit)
        })
        .collect();
    let labels: Vec<usize> = lbl_payload.iter().map(|&b| b as usize).collect();
    let class_count = labels.iter().copied().max().unwrap_or(0) + 1;
    Ok(LabeledDataset::new(images, labels, class_count))
}

/// Write a dataset as an images/labels IDX file pair (8-bit quantized).
pub fn save_idx(ds: &LabeledDataset, images_path: &Path, labels_path: &Path) -> Result<()> {
    let n = ds.len();
    if n == 0 {
        return Err(Error::config("cannot save an empty dataset"));
    }
    let h = ds.images[0].height();
    let w = ds.images[0].width();

    let mut img_bytes = Vec::with_capacity(16 + n * h * w);
    img_bytes.extend_from_slice(&IMAGES_MAGIC.to_be_bytes());
    img_bytes.extend_from_slice(&(n as u32).to_be_bytes());
    img_bytes.extend_from_slice(&(h as u32).to_be_bytes());
    img_bytes.extend_from_slice(&(w as u32).to_be_bytes());
    for img in &ds.images {
        img.expect_space(Space::Unit, "save_idx");
        assert_eq!((img.height(), img.width()), (h, w), "ragged dataset");
        img_bytes.extend(
            img.values()
                .iter()
                .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8),
        );
    }
    fs::write(images_path, img_bytes)?;

    let mut lbl_bytes = Vec::with_capacity(8 + n);
    lbl_bytes.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
    lbl_bytes.extend_from_slice(&(n as u32).to_be_bytes());
    lbl_bytes.extend(ds.labels.iter().map(|&l| l as u8));
    fs::write(labels_path, lbl_bytes)?;
    Ok(())
}

/// Parse magic and big-endian dims; returns (dims, payload).
fn parse_idx_header<'a>(
    bytes: &'a [u8],
    expect_magic: u32,
    rank: usize,
) -> Result<(Vec<usize>, &'a [u8])> {
    if bytes.len() < 4 {
        return Err(Error::parse(0, "file too short for IDX magic"));
    }
    let magic = u32::from_be_bytes(bytes[..4].try_into().unwrap());
    if magic != expect_magic {
        return Err(Error::parse(
            0,
            format!("bad IDX magic 0x{magic:08x}, expected 0x{expect_magic:08x}"),
        ));
    }
    let header_len = 4 + 4 * rank;
    if bytes.len() < header_len {
        return Err(Error::parse(bytes.len(), "truncated IDX dimension header"));
    }
    let dims = (0..rank)
        .map(|i| {
            let off = 4 + 4 * i;
            u32::from_be_bytes(bytes[off..off + 4].try_into().unwrap()) as usize
        })
        .collect();
    Ok((dims, &bytes[header_len..]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::gen_shapes_dataset;

    #[test]
    fn round_trip_preserves_labels_and_quantized_pixels() {
        let dir = tempfile::tempdir().unwrap();
        let imgs = dir.path().join("d.idx");
        let lbls = dir.path().join("l.idx");
        let ds = gen_shapes_dataset(12, 4, 16, 5).unwrap();
        save_idx(&ds, &imgs, &lbls).unwrap();
        let back = load_idx(&imgs, &lbls).unwrap();
        assert_eq!(back.labels, ds.labels);
        assert_eq!(back.class_count, ds.class_count);
        for (a, b) in ds.images.iter().zip(&back.images) {
            for (x, y) in a.values().iter().zip(b.values()) {
                assert!((x - y).abs() <= 0.5 / 255.0 + 1e-12);
            }
        }
    }

    #[test]
    fn wrong_magic_names_offset_zero() {
        let dir = tempfile::tempdir().unwrap();
        let imgs = dir.path().join("bad.idx");
        let lbls = dir.path().join("l.idx");
        std::fs::write(&imgs, [0u8, 0, 8, 9, 0, 0, 0, 1]).unwrap();
        std::fs::write(&lbls, [0u8, 0, 8, 1, 0, 0, 0, 1, 0]).unwrap();
        match load_idx(&imgs, &lbls) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
