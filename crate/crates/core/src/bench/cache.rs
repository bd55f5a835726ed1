//! Binary feature cache: lossless, version-tagged storage of described
//! keypoints so expensive extraction runs once per configuration.
//!
//! Layout (little endian):
//!   magic "GTFC" | u32 version | u16+bytes detector name | u16+bytes
//!   descriptor name | u64 config hash | u8 kind (0 binary, 1 real) |
//!   u32 real length | u32 count | count x feature records.
//! Feature record: x, y, size, angle (NaN = none), response as f64,
//! octave u32, then 32 descriptor bytes (binary) or length x f32 (real).

use std::io::Write as _;
use std::path::Path;

use crate::describe::Descriptor;
use crate::detect::Keypoint;
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"GTFC";
const VERSION: u32 = 1;

fn cache_err(path: &Path, reason: impl Into<String>) -> Error {
    Error::Cache {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

/// Write atomically: temp file in the target directory, then rename.
pub fn save_features(
    path: &Path,
    detector: &str,
    descriptor: &str,
    config_hash: u64,
    features: &[(Keypoint, Descriptor)],
) -> Result<()> {
    let (kind, real_len) = match features.first() {
        Some((_, Descriptor::Real(v))) => (1u8, v.len() as u32),
        _ => (0u8, 0u32),
    };
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    for name in [detector, descriptor] {
        let bytes = name.as_bytes();
        buf.extend_from_slice(&(bytes.len() as u16).to_le_bytes());
        buf.extend_from_slice(bytes);
    }
    buf.extend_from_slice(&config_hash.to_le_bytes());
    buf.push(kind);
    buf.extend_from_slice(&real_len.to_le_bytes());
    buf.extend_from_slice(&(features.len() as u32).to_le_bytes());
    for (kp, desc) in features {
        for v in [kp.x, kp.y, kp.size, kp.angle.unwrap_or(f64::NAN), kp.response] {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        buf.extend_from_slice(&kp.octave.to_le_bytes());
        match desc {
            Descriptor::Binary(words) => {
                if kind != 0 {
                    return Err(Error::KindMismatch(
                        "mixed descriptor kinds in one cache file".into(),
                    ));
                }
                for w in words {
                    buf.extend_from_slice(&w.to_le_bytes());
                }
            }
            Descriptor::Real(values) => {
                if kind != 1 || values.len() as u32 != real_len {
                    return Err(Error::KindMismatch(
                        "inconsistent descriptor shapes in one cache file".into(),
                    ));
                }
                for v in values {
                    buf.extend_from_slice(&v.to_le_bytes());
                }
            }
        }
    }

    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))
        .map_err(|e| Error::io(path, e))?;
    tmp.write_all(&buf).map_err(|e| Error::io(path, e))?;
    tmp.persist(path)
        .map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

struct Reader<'a> {
    path: &'a Path,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(cache_err(self.path, "truncated file"));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f32(&mut self) -> Result<f32> {
        Ok(f32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn name(&mut self) -> Result<String> {
        let len = self.u16()? as usize;
        String::from_utf8(self.take(len)?.to_vec())
            .map_err(|_| cache_err(self.path, "non-utf8 name field"))
    }
}

/// Load a cache file, validating version, detector/descriptor names, and
/// the config hash. Any inconsistency rejects the whole file; no partial
/// data is returned.
pub fn load_features(
    path: &Path,
    detector: &str,
    descriptor: &str,
    config_hash: u64,
) -> Result<Vec<(Keypoint, Descriptor)>> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut r = Reader {
        path,
        bytes: &bytes,
        pos: 0,
    };
    if r.take(4)? != MAGIC {
        return Err(cache_err(path, "bad magic"));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(cache_err(
            path,
            format!("version mismatch: file {version}, expected {VERSION}"),
        ));
    }
    let file_det = r.name()?;
    let file_desc = r.name()?;
    if file_det != detector || file_desc != descriptor {
        return Err(cache_err(
            path,
            format!("cache is for {file_det}/{file_desc}, wanted {detector}/{descriptor}"),
        ));
    }
    let file_hash = r.u64()?;
    if file_hash != config_hash {
        return Err(cache_err(path, "config hash mismatch (stale cache)"));
    }
    let kind = r.take(1)?[0];
    let real_len = r.u32()? as usize;
    let count = r.u32()? as usize;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let x = r.f64()?;
        let y = r.f64()?;
        let size = r.f64()?;
        let angle = r.f64()?;
        let response = r.f64()?;
        let octave = r.u32()?;
        let kp = Keypoint {
            x,
            y,
            size,
            angle: if angle.is_nan() { None } else { Some(angle) },
            response,
            octave,
        };
        let desc = match kind {
            0 => {
                let mut words = [0u64; 4];
                for w in &mut words {
                    *w = r.u64()?;
                }
                Descriptor::Binary(words)
            }
            1 => {
                let mut values = Vec::with_capacity(real_len);
                for _ in 0..real_len {
                    values.push(r.f32()?);
                }
                Descriptor::Real(values)
            }
            k => return Err(cache_err(path, format!("unknown descriptor kind {k}"))),
        };
        out.push((kp, desc));
    }
    if r.pos != bytes.len() {
        return Err(cache_err(path, "trailing bytes after feature records"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_features(n: usize, binary: bool, seed: u64) -> Vec<(Keypoint, Descriptor)> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| {
                let kp = Keypoint {
                    x: rng.gen_range(0.0..640.0),
                    y: rng.gen_range(0.0..480.0),
                    size: rng.gen_range(3.0..30.0),
                    angle: if i % 2 == 0 {
                        Some(rng.gen_range(0.0..360.0))
                    } else {
                        None
                    },
                    response: rng.gen_range(0.0..1.0),
                    octave: rng.gen_range(0..5),
                };
                let desc = if binary {
                    Descriptor::Binary([rng.gen(), rng.gen(), rng.gen(), rng.gen()])
                } else {
                    Descriptor::Real((0..128).map(|_| rng.gen_range(-1.0..1.0)).collect())
                };
                (kp, desc)
            })
            .collect()
    }

    #[test]
    fn round_trip_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        for (binary, name) in [(true, "bin.gtfc"), (false, "real.gtfc")] {
            let path = dir.path().join(name);
            let feats = random_features(1000, binary, 1);
            save_features(&path, "dog", "brief", 42, &feats).unwrap();
            let loaded = load_features(&path, "dog", "brief", 42).unwrap();
            assert_eq!(loaded, feats);
        }
    }

    #[test]
    fn rejects_wrong_hash_names_and_version() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.gtfc");
        let feats = random_features(10, true, 2);
        save_features(&path, "dog", "brief", 42, &feats).unwrap();
        assert!(load_features(&path, "dog", "brief", 43).is_err());
        assert!(load_features(&path, "fast", "brief", 42).is_err());
        assert!(load_features(&path, "dog", "latch", 42).is_err());

        // Corrupt the version field.
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[4] = 99;
        std::fs::write(&path, &bytes).unwrap();
        assert!(load_features(&path, "dog", "brief", 42).is_err());
    }

    #[test]
    fn truncation_is_an_error_not_partial_data() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.gtfc");
        let feats = random_features(50, true, 3);
        save_features(&path, "dog", "brief", 7, &feats).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 5]).unwrap();
        let err = load_features(&path, "dog", "brief", 7);
        assert!(err.is_err(), "{err:?}");
    }

    #[test]
    fn empty_feature_list_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.gtfc");
        save_features(&path, "fast", "gradhist", 0, &[]).unwrap();
        assert_eq!(load_features(&path, "fast", "gradhist", 0).unwrap(), vec![]);
    }
}
