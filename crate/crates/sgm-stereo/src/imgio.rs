//! Bit-exact image and disparity-map I/O, plus dataset folder scanning.
//!
//! PGM (binary, `P5`) and PFM are the first-class containers: both are
//! self-describing and implementable without external codecs. Disparity maps
//! use one of two encodings:
//!
//! * `fixed256_16bit` — 16-bit PGM, big-endian samples, stored value
//!   `round(256 * disparity)`, invalid pixels stored as 0. This matches the
//!   widespread benchmark convention, so external tooling can read outputs.
//! * `float_map` — grayscale PFM with little-endian samples (negative scale),
//!   invalid pixels stored as a quiet NaN.
//!
//! Other containers (e.g. PNG datasets) are decoded through the `image`
//! crate behind the same contracts; see [`load_gray`] and [`load_disparity`].

use std::fs;
use std::path::{Path, PathBuf};

use crate::disparity::DisparityMap;
use crate::error::Error;
use crate::image::GrayImage;

/// On-disk encoding of a disparity map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisparityEncoding {
    /// 16-bit PGM, `stored = round(256 * disparity)`, 0 marks invalid.
    /// Values are limited to 65535/256 px and round-trip within 1/512 px.
    Fixed256,
    /// Grayscale PFM; non-finite samples mark invalid pixels. Finite values
    /// round-trip bit-exactly.
    FloatMap,
}

// ---------------------------------------------------------------------------
// PGM
// ---------------------------------------------------------------------------

struct PnmHeader {
    width: usize,
    height: usize,
    maxval: u32,
    data_offset: usize,
}

/// Parses a binary PGM header: `P5`, then whitespace-separated width, height
/// and maxval, with `#` comments allowed inside any whitespace run, then a
/// single whitespace byte before the raster.
fn parse_pgm_header(bytes: &[u8], path: &Path) -> Result<PnmHeader, Error> {
    if bytes.len() < 2 {
        return Err(Error::format(path, "file too short for a PGM header"));
    }
    match &bytes[..2] {
        b"P5" => {}
        b"P2" => {
            return Err(Error::format(
                path,
                "ASCII PGM (P2) is not supported, only binary P5",
            ))
        }
        magic if magic[0] == b'P' => {
            return Err(Error::format(
                path,
                format!("unsupported netpbm magic {:?}", String::from_utf8_lossy(magic)),
            ))
        }
        _ => return Err(Error::format(path, "not a PGM file")),
    }
    let mut pos = 2;
    let mut fields = [0u64; 3];
    for field in fields.iter_mut() {
        skip_whitespace_and_comments(bytes, &mut pos);
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            *field = field
                .checked_mul(10)
                .and_then(|v| v.checked_add((bytes[pos] - b'0') as u64))
                .ok_or_else(|| Error::format(path, "header value out of range"))?;
            pos += 1;
        }
        if pos == start {
            return Err(Error::format(path, "malformed PGM header"));
        }
    }
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(Error::format(path, "missing whitespace after maxval"));
    }
    pos += 1;
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(Error::format(path, "zero image dimension"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::format(path, format!("invalid maxval {maxval}")));
    }
    Ok(PnmHeader {
        width: width as usize,
        height: height as usize,
        maxval: maxval as u32,
        data_offset: pos,
    })
}

fn skip_whitespace_and_comments(bytes: &[u8], pos: &mut usize) {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
        } else {
            return;
        }
    }
}

/// Reads an 8-bit binary PGM (`P5`, maxval 255).
pub fn read_gray(path: impl AsRef<Path>) -> Result<GrayImage, Error> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let header = parse_pgm_header(&bytes, path)?;
    if header.maxval != 255 {
        return Err(Error::format(
            path,
            format!("expected maxval 255 for an 8-bit image, found {}", header.maxval),
        ));
    }
    let len = header.width * header.height;
    let data = &bytes[header.data_offset..];
    if data.len() < len {
        return Err(Error::format(
            path,
            format!("truncated raster: expected {len} bytes, found {}", data.len()),
        ));
    }
    GrayImage::new(header.width, header.height, data[..len].to_vec())
}

/// Writes an 8-bit binary PGM.
pub fn write_gray(img: &GrayImage, path: impl AsRef<Path>) -> Result<(), Error> {
    let path = path.as_ref();
    let mut bytes = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    bytes.extend_from_slice(img.as_slice());
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Maximum disparity representable by [`DisparityEncoding::Fixed256`].
pub const FIXED256_MAX: f32 = 65535.0 / 256.0;

fn encode_fixed256(map: &DisparityMap, path: &Path) -> Result<Vec<u8>, Error> {
    let mut bytes = format!("P5\n{} {}\n65535\n", map.width(), map.height()).into_bytes();
    for (_, _, value) in map.iter() {
        let stored: u16 = match value {
            None => 0,
            Some(v) => {
                let scaled = (v as f64 * 256.0).round();
                if !(0.0..=65535.0).contains(&scaled) {
                    return Err(Error::DisparityOutOfRange {
                        value: v,
                        max: FIXED256_MAX,
                    });
                }
                scaled as u16
            }
        };
        bytes.extend_from_slice(&stored.to_be_bytes());
    }
    let _ = path;
    Ok(bytes)
}

fn decode_fixed256(width: usize, height: usize, data: &[u8], path: &Path) -> Result<DisparityMap, Error> {
    let len = width * height * 2;
    if data.len() < len {
        return Err(Error::format(
            path,
            format!("truncated raster: expected {len} bytes, found {}", data.len()),
        ));
    }
    let mut map = DisparityMap::invalid(width, height);
    for y in 0..height {
        for x in 0..width {
            let i = (y * width + x) * 2;
            let stored = u16::from_be_bytes([data[i], data[i + 1]]);
            if stored != 0 {
                map.set(x, y, stored as f32 / 256.0);
            }
        }
    }
    Ok(map)
}

// ---------------------------------------------------------------------------
// PFM
// ---------------------------------------------------------------------------

fn encode_pfm(map: &DisparityMap) -> Vec<u8> {
    let mut bytes = format!("Pf\n{} {}\n-1.0\n", map.width(), map.height()).into_bytes();
    // PFM stores rows bottom-to-top; a negative scale marks little-endian.
    for y in (0..map.height()).rev() {
        for x in 0..map.width() {
            let v = map.get(x, y).unwrap_or(f32::NAN);
            bytes.extend_from_slice(&v.to_le_bytes());
        }
    }
    bytes
}

fn decode_pfm(bytes: &[u8], path: &Path) -> Result<DisparityMap, Error> {
    if bytes.len() < 2 || &bytes[..2] != b"Pf" {
        if bytes.len() >= 2 && &bytes[..2] == b"PF" {
            return Err(Error::format(path, "color PFM is not supported"));
        }
        return Err(Error::format(path, "not a grayscale PFM file"));
    }
    let mut pos = 2;
    let token = |pos: &mut usize| -> Result<String, Error> {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        let start = *pos;
        while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::format(path, "malformed PFM header"));
        }
        Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
    };
    let width: usize = token(&mut pos)?
        .parse()
        .map_err(|_| Error::format(path, "malformed PFM width"))?;
    let height: usize = token(&mut pos)?
        .parse()
        .map_err(|_| Error::format(path, "malformed PFM height"))?;
    let scale: f32 = token(&mut pos)?
        .parse()
        .map_err(|_| Error::format(path, "malformed PFM scale"))?;
    if width == 0 || height == 0 {
        return Err(Error::format(path, "zero image dimension"));
    }
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(Error::format(path, "missing whitespace after PFM scale"));
    }
    pos += 1;
    let little_endian = scale < 0.0;
    let data = &bytes[pos..];
    let len = width
        .checked_mul(height)
        .and_then(|p| p.checked_mul(4))
        .ok_or_else(|| Error::format(path, "image too large"))?;
    if data.len() < len {
        return Err(Error::format(
            path,
            format!("truncated raster: expected {len} bytes, found {}", data.len()),
        ));
    }
    let mut map = DisparityMap::invalid(width, height);
    let mut i = 0;
    for y in (0..height).rev() {
        for x in 0..width {
            let raw = [data[i], data[i + 1], data[i + 2], data[i + 3]];
            let v = if little_endian {
                f32::from_le_bytes(raw)
            } else {
                f32::from_be_bytes(raw)
            };
            if v.is_finite() {
                map.set(x, y, v);
            }
            i += 4;
        }
    }
    Ok(map)
}

// ---------------------------------------------------------------------------
// Disparity maps
// ---------------------------------------------------------------------------

/// Writes a disparity map in the given encoding.
pub fn write_disparity(
    map: &DisparityMap,
    path: impl AsRef<Path>,
    encoding: DisparityEncoding,
) -> Result<(), Error> {
    let path = path.as_ref();
    let bytes = match encoding {
        DisparityEncoding::Fixed256 => encode_fixed256(map, path)?,
        DisparityEncoding::FloatMap => encode_pfm(map),
    };
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Reads a disparity map written by [`write_disparity`].
pub fn read_disparity(
    path: impl AsRef<Path>,
    encoding: DisparityEncoding,
) -> Result<DisparityMap, Error> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    match encoding {
        DisparityEncoding::Fixed256 => {
            let header = parse_pgm_header(&bytes, path)?;
            if header.maxval != 65535 {
                return Err(Error::format(
                    path,
                    format!("expected maxval 65535 for a disparity map, found {}", header.maxval),
                ));
            }
            decode_fixed256(header.width, header.height, &bytes[header.data_offset..], path)
        }
        DisparityEncoding::FloatMap => decode_pfm(&bytes, path),
    }
}

// ---------------------------------------------------------------------------
// Container delegation
// ---------------------------------------------------------------------------

/// Reads a grayscale image from any supported container: PGM through the
/// built-in parser, anything else through the `image` crate.
pub fn load_gray(path: impl AsRef<Path>) -> Result<GrayImage, Error> {
    let path = path.as_ref();
    if extension_is(path, "pgm") {
        return read_gray(path);
    }
    let decoded = image::open(path).map_err(|e| Error::Decode {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    let luma = decoded.into_luma8();
    GrayImage::new(luma.width() as usize, luma.height() as usize, luma.into_raw())
}

/// Reads a ground-truth/disparity map from any supported container. PGM and
/// PFM use the built-in parsers; 16-bit PNG is decoded through the `image`
/// crate with the same `fixed256` semantics (stored value / 256, 0 invalid).
pub fn load_disparity(path: impl AsRef<Path>) -> Result<DisparityMap, Error> {
    let path = path.as_ref();
    if extension_is(path, "pgm") || extension_is(path, "pgm16") {
        return read_disparity(path, DisparityEncoding::Fixed256);
    }
    if extension_is(path, "pfm") {
        return read_disparity(path, DisparityEncoding::FloatMap);
    }
    let decoded = image::open(path).map_err(|e| Error::Decode {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    match decoded {
        image::DynamicImage::ImageLuma16(img) => {
            let (w, h) = (img.width() as usize, img.height() as usize);
            let raw = img.into_raw();
            Ok(DisparityMap::from_fn(w, h, |x, y| {
                let stored = raw[y * w + x];
                (stored != 0).then(|| stored as f32 / 256.0)
            }))
        }
        _ => Err(Error::Decode {
            path: path.to_path_buf(),
            reason: "disparity containers must be 16-bit grayscale".to_string(),
        }),
    }
}

fn extension_is(path: &Path, ext: &str) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case(ext))
}

// ---------------------------------------------------------------------------
// Dataset layouts
// ---------------------------------------------------------------------------

/// How stereo pairs are organized on disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetLayout {
    /// Flat folder of `<name>_L.pgm` / `<name>_R.pgm` pairs with optional
    /// `<name>_gt.*` ground truth.
    Pairs,
    /// KITTI-style folders: `image_2/<id>.*` (left), `image_3/<id>.*`
    /// (right), `disp_occ_0/<id>.*` (ground truth).
    KittiLike,
}

/// One stereo pair found by [`scan_dataset`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetEntry {
    pub name: String,
    pub left: PathBuf,
    pub right: PathBuf,
    pub gt: Option<PathBuf>,
}

/// The result of scanning a dataset folder: complete pairs, sorted by name,
/// plus warnings about files that could not be paired up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetScan {
    pub entries: Vec<DatasetEntry>,
    pub warnings: Vec<String>,
}

/// Lists the stereo pairs of a dataset folder. Deterministic: entries are
/// sorted lexicographically by name. Incomplete pairs are reported as
/// warnings, not errors.
pub fn scan_dataset(root: impl AsRef<Path>, layout: DatasetLayout) -> Result<DatasetScan, Error> {
    let root = root.as_ref();
    match layout {
        DatasetLayout::Pairs => scan_pairs(root),
        DatasetLayout::KittiLike => scan_kitti(root),
    }
}

fn list_files(dir: &Path) -> Result<Vec<PathBuf>, Error> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn scan_pairs(root: &Path) -> Result<DatasetScan, Error> {
    #[derive(Default)]
    struct Slots {
        left: Option<PathBuf>,
        right: Option<PathBuf>,
        gt: Option<PathBuf>,
    }
    let mut slots: std::collections::BTreeMap<String, Slots> = Default::default();
    for path in list_files(root)? {
        let Some(stem) = path.file_stem().and_then(|s| s.to_str()).map(str::to_string) else {
            continue;
        };
        if let Some(name) = stem.strip_suffix("_L") {
            if extension_is(&path, "pgm") {
                slots.entry(name.to_string()).or_default().left = Some(path);
            }
        } else if let Some(name) = stem.strip_suffix("_R") {
            if extension_is(&path, "pgm") {
                slots.entry(name.to_string()).or_default().right = Some(path);
            }
        } else if let Some(name) = stem.strip_suffix("_gt") {
            slots.entry(name.to_string()).or_default().gt = Some(path);
        }
    }
    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    for (name, slot) in slots {
        match (slot.left, slot.right) {
            (Some(left), Some(right)) => entries.push(DatasetEntry {
                name,
                left,
                right,
                gt: slot.gt,
            }),
            (Some(_), None) => warnings.push(format!("{name}: left image without right image")),
            (None, Some(_)) => warnings.push(format!("{name}: right image without left image")),
            (None, None) => warnings.push(format!("{name}: ground truth without image pair")),
        }
    }
    Ok(DatasetScan { entries, warnings })
}

fn scan_kitti(root: &Path) -> Result<DatasetScan, Error> {
    let left_dir = root.join("image_2");
    let right_dir = root.join("image_3");
    let gt_dir = root.join("disp_occ_0");
    let mut warnings = Vec::new();
    if !left_dir.is_dir() || !right_dir.is_dir() {
        warnings.push(format!(
            "{}: missing image_2/ or image_3/ folder",
            root.display()
        ));
        return Ok(DatasetScan {
            entries: Vec::new(),
            warnings,
        });
    }
    let stem_of = |p: &Path| {
        p.file_stem()
            .and_then(|s| s.to_str())
            .map(|s| s.to_string())
    };
    let rights: std::collections::BTreeMap<String, PathBuf> = list_files(&right_dir)?
        .into_iter()
        .filter_map(|p| stem_of(&p).map(|s| (s, p)))
        .collect();
    let gts: std::collections::BTreeMap<String, PathBuf> = if gt_dir.is_dir() {
        list_files(&gt_dir)?
            .into_iter()
            .filter_map(|p| stem_of(&p).map(|s| (s, p)))
            .collect()
    } else {
        Default::default()
    };
    let mut entries = Vec::new();
    for left in list_files(&left_dir)? {
        let Some(name) = stem_of(&left) else { continue };
        match rights.get(&name) {
            Some(right) => entries.push(DatasetEntry {
                name: name.clone(),
                left,
                right: right.clone(),
                gt: gts.get(&name).cloned(),
            }),
            None => warnings.push(format!("{name}: left image without right image")),
        }
    }
    Ok(DatasetScan { entries, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pgm_bytes_pass_through() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tiny.pgm");
        fs::write(&path, b"P5\n2 2\n255\n\x00\x7F\x80\xFF").unwrap();
        let img = read_gray(&path).unwrap();
        assert_eq!(img.as_slice(), &[0, 127, 128, 255]);
    }

    #[test]
    fn pgm_header_comments_and_whitespace() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("commented.pgm");
        fs::write(
            &path,
            b"P5 # magic\n# a comment line\n  2\t1 # dims\n255\n\x01\x02",
        )
        .unwrap();
        let img = read_gray(&path).unwrap();
        assert_eq!(img.as_slice(), &[1, 2]);
    }

    #[test]
    fn ascii_pgm_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ascii.pgm");
        fs::write(&path, b"P2\n2 2\n255\n0 1 2 3\n").unwrap();
        let err = read_gray(&path).unwrap_err();
        assert!(err.to_string().contains("P2"));
    }

    #[test]
    fn truncated_raster_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("short.pgm");
        fs::write(&path, b"P5\n4 4\n255\n\x00\x01").unwrap();
        assert!(matches!(read_gray(&path), Err(Error::Format { .. })));
    }

    #[test]
    fn sixteen_bit_input_is_rejected_by_read_gray() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("deep.pgm");
        fs::write(&path, b"P5\n1 1\n65535\n\x01\x00").unwrap();
        assert!(matches!(read_gray(&path), Err(Error::Format { .. })));
    }

    #[test]
    fn gray_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("round.pgm");
        let img = GrayImage::from_fn(7, 5, |x, y| (x * 36 + y * 7) as u8);
        write_gray(&img, &path).unwrap();
        assert_eq!(read_gray(&path).unwrap(), img);
    }

    #[test]
    fn fixed256_encoding_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.pgm");
        let mut map = DisparityMap::invalid(2, 1);
        map.set(0, 0, 64.25);
        write_disparity(&map, &path, DisparityEncoding::Fixed256).unwrap();
        let bytes = fs::read(&path).unwrap();
        let data = &bytes[bytes.len() - 4..];
        // 64.25 * 256 = 16448 = 0x4040 big-endian; invalid pixel stores 0.
        assert_eq!(data, &[0x40, 0x40, 0x00, 0x00]);
        let back = read_disparity(&path, DisparityEncoding::Fixed256).unwrap();
        assert_eq!(back.get(0, 0), Some(64.25));
        assert_eq!(back.get(1, 0), None);
    }

    #[test]
    fn fixed256_value_one_pixel() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("one.pgm");
        fs::write(&path, b"P5\n1 1\n65535\n\x01\x00").unwrap();
        let map = read_disparity(&path, DisparityEncoding::Fixed256).unwrap();
        assert_eq!(map.get(0, 0), Some(1.0));
    }

    #[test]
    fn fixed256_rejects_values_out_of_range() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("big.pgm");
        let mut map = DisparityMap::invalid(1, 1);
        map.set(0, 0, 256.5);
        assert!(matches!(
            write_disparity(&map, &path, DisparityEncoding::Fixed256),
            Err(Error::DisparityOutOfRange { .. })
        ));
    }

    #[test]
    fn pfm_roundtrip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("map.pfm");
        let map = DisparityMap::from_fn(5, 4, |x, y| {
            if (x + y) % 3 == 0 {
                None
            } else {
                Some(x as f32 + y as f32 / 7.0)
            }
        });
        write_disparity(&map, &path, DisparityEncoding::FloatMap).unwrap();
        let back = read_disparity(&path, DisparityEncoding::FloatMap).unwrap();
        assert_eq!(back, map);
    }

    proptest! {
        /// Arbitrary bytes never crash the parsers, they only error.
        #[test]
        fn parsers_are_total(bytes in proptest::collection::vec(any::<u8>(), 0..256)) {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("fuzz.bin");
            fs::write(&path, &bytes).unwrap();
            let _ = read_gray(&path);
            let _ = read_disparity(&path, DisparityEncoding::Fixed256);
            let _ = read_disparity(&path, DisparityEncoding::FloatMap);
        }

        /// Fixed-point quantization stays within the documented 1/512 px.
        #[test]
        fn fixed256_roundtrip_error_bound(values in proptest::collection::vec(0.004f32..255.0, 6)) {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("q.pgm");
            let map = DisparityMap::from_fn(3, 2, |x, y| Some(values[y * 3 + x]));
            write_disparity(&map, &path, DisparityEncoding::Fixed256).unwrap();
            let back = read_disparity(&path, DisparityEncoding::Fixed256).unwrap();
            for (x, y, v) in map.iter() {
                let v = v.unwrap();
                let b = back.get(x, y).expect("pixel lost in roundtrip");
                prop_assert!((v - b).abs() <= 1.0 / 512.0 + f32::EPSILON);
            }
        }
    }

    #[test]
    fn dataset_scan_pairs() {
        let dir = tempfile::tempdir().unwrap();
        let img = GrayImage::from_fn(4, 4, |x, _| x as u8);
        write_gray(&img, dir.path().join("a_L.pgm")).unwrap();
        write_gray(&img, dir.path().join("a_R.pgm")).unwrap();
        let mut gt = DisparityMap::invalid(4, 4);
        gt.set(0, 0, 1.0);
        write_disparity(&gt, dir.path().join("a_gt.pgm"), DisparityEncoding::Fixed256).unwrap();
        write_gray(&img, dir.path().join("b_L.pgm")).unwrap();
        write_gray(&img, dir.path().join("b_R.pgm")).unwrap();
        write_gray(&img, dir.path().join("orphan_L.pgm")).unwrap();

        let scan = scan_dataset(dir.path(), DatasetLayout::Pairs).unwrap();
        assert_eq!(scan.entries.len(), 2);
        assert_eq!(scan.entries[0].name, "a");
        assert!(scan.entries[0].gt.is_some());
        assert_eq!(scan.entries[1].name, "b");
        assert!(scan.entries[1].gt.is_none());
        assert_eq!(scan.warnings.len(), 1);
        assert!(scan.warnings[0].contains("orphan"));
    }

    #[test]
    fn dataset_scan_empty_dir() {
        let dir = tempfile::tempdir().unwrap();
        let scan = scan_dataset(dir.path(), DatasetLayout::Pairs).unwrap();
        assert!(scan.entries.is_empty());
        assert!(scan.warnings.is_empty());
    }

    #[test]
    fn dataset_scan_kitti_layout() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir(dir.path().join("image_2")).unwrap();
        fs::create_dir(dir.path().join("image_3")).unwrap();
        fs::create_dir(dir.path().join("disp_occ_0")).unwrap();
        let img = GrayImage::from_fn(4, 4, |x, _| x as u8);
        write_gray(&img, dir.path().join("image_2/000000_10.pgm")).unwrap();
        write_gray(&img, dir.path().join("image_3/000000_10.pgm")).unwrap();
        let mut gt = DisparityMap::invalid(4, 4);
        gt.set(1, 1, 2.0);
        write_disparity(
            &gt,
            dir.path().join("disp_occ_0/000000_10.pgm"),
            DisparityEncoding::Fixed256,
        )
        .unwrap();
        write_gray(&img, dir.path().join("image_2/000001_10.pgm")).unwrap();

        let scan = scan_dataset(dir.path(), DatasetLayout::KittiLike).unwrap();
        assert_eq!(scan.entries.len(), 1);
        assert_eq!(scan.entries[0].name, "000000_10");
        assert!(scan.entries[0].gt.is_some());
        assert_eq!(scan.warnings.len(), 1);
    }

    #[test]
    fn missing_file_is_an_io_error() {
        assert!(matches!(
            read_gray("/nonexistent/nowhere.pgm"),
            Err(Error::Io { .. })
        ));
    }
}
