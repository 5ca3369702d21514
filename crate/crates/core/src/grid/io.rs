//! HFORM on-disk container: a JSON manifest next to one raw binary per
//! component.
//!
//! Manifest:
//!
//! ```json
//! {
//!   "version": 1,
//!   "n": 2,
//!   "k": 1,
//!   "shape": [64, 64],
//!   "box": 8.0,
//!   "layout": "row-major-axis0-slowest",
//!   "components": [
//!     {"axes": [0], "data": "theta_c0.f64"},
//!     {"axes": [1], "data": "theta_c1.f64"}
//!   ]
//! }
//! ```
//!
//! Axes are 0-based. Each data file holds exactly Nⁿ little-endian IEEE-754
//! float64 values; components may be omitted (they read back as zero). The
//! round trip is bit-lossless.

use std::fs;
use std::io::{Read, Write as _};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{GridForm, GridSpec};
use crate::error::{Error, Result};
use crate::exterior::FormIndex;

pub(crate) const LAYOUT: &str = "row-major-axis0-slowest";

#[derive(Serialize, Deserialize)]
struct Manifest {
    version: u32,
    n: usize,
    k: usize,
    shape: Vec<usize>,
    #[serde(rename = "box")]
    box_len: f64,
    layout: String,
    components: Vec<ComponentEntry>,
}

#[derive(Serialize, Deserialize)]
struct ComponentEntry {
    axes: Vec<usize>,
    data: String,
}

/// Write `form` as a manifest at `path` plus one `<stem>_c<axes>.f64` binary
/// per component in the same directory.
pub fn write_form(form: &GridForm, path: &Path) -> Result<()> {
    let spec = form.spec();
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Error::Format(format!("manifest path {path:?} has no usable stem")))?;
    let mut entries = Vec::new();
    for (idx, data) in form.components() {
        let axes: Vec<usize> = idx.axes().collect();
        let suffix: Vec<String> = axes.iter().map(|a| a.to_string()).collect();
        let file_name = format!("{stem}_c{}.f64", suffix.join("_"));
        let mut bytes = Vec::with_capacity(data.len() * 8);
        for &x in data {
            bytes.extend_from_slice(&x.to_le_bytes());
        }
        fs::File::create(dir.join(&file_name))?.write_all(&bytes)?;
        entries.push(ComponentEntry {
            axes,
            data: file_name,
        });
    }
    let manifest = Manifest {
        version: 1,
        n: spec.dim(),
        k: form.degree(),
        shape: vec![spec.size(); spec.dim()],
        box_len: spec.box_len(),
        layout: LAYOUT.to_string(),
        components: entries,
    };
    let json = serde_json::to_string_pretty(&manifest)?;
    fs::write(path, json + "\n")?;
    Ok(())
}

/// Read a form written by [`write_form`]. Fails on malformed manifests,
/// shape mismatches, non-power-of-two sizes and non-finite samples.
pub fn read_form(path: &Path) -> Result<GridForm> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("cannot read manifest {path:?}: {e}")))?;
    let manifest: Manifest =
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("bad manifest: {e}")))?;
    if manifest.version != 1 {
        return Err(Error::Format(format!(
            "unsupported container version {}",
            manifest.version
        )));
    }
    if manifest.layout != LAYOUT {
        return Err(Error::Format(format!(
            "unsupported layout `{}`",
            manifest.layout
        )));
    }
    if manifest.shape.len() != manifest.n {
        return Err(Error::Format(format!(
            "shape has {} entries but n = {}",
            manifest.shape.len(),
            manifest.n
        )));
    }
    let size = *manifest
        .shape
        .first()
        .ok_or_else(|| Error::Format("empty shape".into()))?;
    if manifest.shape.iter().any(|&s| s != size) {
        return Err(Error::Format(format!(
            "non-uniform shape {:?}",
            manifest.shape
        )));
    }
    let spec = GridSpec::new(manifest.n, size, manifest.box_len)
        .map_err(|e| Error::Format(e.to_string()))?;
    if manifest.k > manifest.n {
        return Err(Error::Format(format!(
            "degree {} exceeds dimension {}",
            manifest.k, manifest.n
        )));
    }
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut form = GridForm::zero(spec, manifest.k);
    let mut seen = std::collections::BTreeSet::new();
    for entry in &manifest.components {
        let idx = FormIndex::new(manifest.n, &entry.axes)
            .map_err(|e| Error::Format(format!("bad component axes {:?}: {e}", entry.axes)))?;
        if idx.degree() != manifest.k {
            return Err(Error::Format(format!(
                "component {:?} has degree {} but the form has k = {}",
                entry.axes,
                idx.degree(),
                manifest.k
            )));
        }
        if !seen.insert(idx.clone()) {
            return Err(Error::Format(format!(
                "duplicate component {:?}",
                entry.axes
            )));
        }
        let data_path = dir.join(&entry.data);
        let mut file = fs::File::open(&data_path)
            .map_err(|e| Error::Format(format!("cannot open {data_path:?}: {e}")))?;
        let expected_bytes = spec.point_count() * 8;
        let mut bytes = Vec::with_capacity(expected_bytes);
        file.read_to_end(&mut bytes)?;
        if bytes.len() != expected_bytes {
            return Err(Error::Format(format!(
                "{data_path:?} holds {} bytes, expected {expected_bytes}",
                bytes.len()
            )));
        }
        let mut data = Vec::with_capacity(spec.point_count());
        for chunk in bytes.chunks_exact(8) {
            let value = f64::from_le_bytes(chunk.try_into().expect("chunk of 8"));
            if !value.is_finite() {
                return Err(Error::Format(format!("non-finite sample in {data_path:?}")));
            }
            data.push(value);
        }
        form.set_component(idx, data)
            .map_err(|e| Error::Format(e.to_string()))?;
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::random_form;
    use crate::rng::SplitMix64;

    #[test]
    fn roundtrip_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let mut rng = SplitMix64::new(2);
        let spec = GridSpec::new(2, 8, 3.5).unwrap();
        let f = random_form(&mut rng, spec, 1);
        let path = dir.path().join("theta.hform");
        write_form(&f, &path).unwrap();
        let back = read_form(&path).unwrap();
        assert_eq!(back.spec(), f.spec());
        assert_eq!(back.degree(), f.degree());
        for (idx, data) in f.components() {
            assert_eq!(back.component(idx), data.as_slice(), "{idx}");
        }
    }

    #[test]
    fn missing_components_read_as_zero() {
        let dir = tempfile::tempdir().unwrap();
        let spec = GridSpec::new(2, 4, 1.0).unwrap();
        let manifest = r#"{
            "version": 1, "n": 2, "k": 1, "shape": [4, 4], "box": 1.0,
            "layout": "row-major-axis0-slowest", "components": []
        }"#;
        let path = dir.path().join("empty.hform");
        std::fs::write(&path, manifest).unwrap();
        let form = read_form(&path).unwrap();
        assert_eq!(form.spec(), &spec);
        assert!(form.is_zero());
    }

    #[test]
    fn rejects_malformed_input() {
        let dir = tempfile::tempdir().unwrap();
        let write = |name: &str, body: &str| {
            let p = dir.path().join(name);
            std::fs::write(&p, body).unwrap();
            p
        };
        // Not JSON at all.
        assert!(read_form(&write("a.hform", "not json")).is_err());
        // Wrong version.
        assert!(read_form(&write(
            "b.hform",
            r#"{"version":2,"n":2,"k":0,"shape":[4,4],"box":1.0,
               "layout":"row-major-axis0-slowest","components":[]}"#
        ))
        .is_err());
        // Non-power-of-two size.
        assert!(read_form(&write(
            "c.hform",
            r#"{"version":1,"n":2,"k":0,"shape":[5,5],"box":1.0,
               "layout":"row-major-axis0-slowest","components":[]}"#
        ))
        .is_err());
        // Shape/dimension mismatch.
        assert!(read_form(&write(
            "d.hform",
            r#"{"version":1,"n":2,"k":0,"shape":[4],"box":1.0,
               "layout":"row-major-axis0-slowest","components":[]}"#
        ))
        .is_err());
        // Non-uniform shape.
        assert!(read_form(&write(
            "e.hform",
            r#"{"version":1,"n":2,"k":0,"shape":[4,8],"box":1.0,
               "layout":"row-major-axis0-slowest","components":[]}"#
        ))
        .is_err());
        // Component with the wrong degree.
        assert!(read_form(&write(
            "f.hform",
            r#"{"version":1,"n":2,"k":0,"shape":[4,4],"box":1.0,
               "layout":"row-major-axis0-slowest",
               "components":[{"axes":[0],"data":"missing.f64"}]}"#
        ))
        .is_err());
    }

    #[test]
    fn rejects_truncated_data_and_nan() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = r#"{
            "version": 1, "n": 1, "k": 0, "shape": [4], "box": 1.0,
            "layout": "row-major-axis0-slowest",
            "components": [{"axes": [], "data": "payload.f64"}]
        }"#;
        let path = dir.path().join("t.hform");
        std::fs::write(&path, manifest).unwrap();
        // Too short.
        std::fs::write(dir.path().join("payload.f64"), [0u8; 8 * 3]).unwrap();
        assert!(read_form(&path).is_err());
        // Right length but contains a NaN.
        let mut bytes = Vec::new();
        for v in [1.0f64, 2.0, f64::NAN, 4.0] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        std::fs::write(dir.path().join("payload.f64"), &bytes).unwrap();
        assert!(read_form(&path).is_err());
    }
}
