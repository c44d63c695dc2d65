//! File loading, canonical serialization, digests, and the trace
//! directory format.
//!
//! Canonical form is pretty-printed JSON with sorted object keys (the
//! wire structs use BTreeMap) and a trailing newline; serializing a
//! parsed canonical file reproduces it byte for byte.  Paths inside
//! files resolve relative to the referencing file's directory, falling
//! back to the directory named by PURELAB_FIXTURES.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fincat::{validate_category, FinCat, RawCategory};
use crate::limits::Square;
use crate::presheaf::{validate_hom, validate_presheaf, Hom, Presheaf, RawHom, RawPresheaf};
use crate::purity::{EqSystem, RawEqSystem};
use crate::witness::ChainTrace;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Pretty JSON with a trailing newline; the round-trip identity for
/// canonical files.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("wire types serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, canonical_json(value))
        .map_err(|e| Error::Io { path: path.display().to_string(), detail: e.to_string() })
}

/// Identity of one input file, embedded in reports.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

fn read_file(path: &Path) -> Result<(String, InputDigest)> {
    let text = fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::FileNotFound(path.display().to_string())
        } else {
            Error::Io { path: path.display().to_string(), detail: e.to_string() }
        }
    })?;
    let digest =
        InputDigest { path: path.display().to_string(), sha256: sha256_hex(text.as_bytes()) };
    Ok((text, digest))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::MalformedJson {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

/// Resolves a path mentioned inside `base_file`: absolute paths stand,
/// otherwise relative to the referencing file, then to PURELAB_FIXTURES.
pub fn resolve_ref(base_file: &Path, reference: &str) -> PathBuf {
    let r = Path::new(reference);
    if r.is_absolute() {
        return r.to_path_buf();
    }
    let sibling = base_file.parent().unwrap_or(Path::new(".")).join(r);
    if sibling.exists() {
        return sibling;
    }
    if let Ok(dir) = std::env::var("PURELAB_FIXTURES") {
        let under = Path::new(&dir).join(r);
        if under.exists() {
            return under;
        }
    }
    sibling
}

pub fn load_category(path: &Path) -> Result<(Arc<FinCat>, Vec<InputDigest>)> {
    let (text, digest) = read_file(path)?;
    let raw: RawCategory = parse_json(path, &text)?;
    Ok((Arc::new(validate_category(&raw)?), vec![digest]))
}

pub fn load_presheaf(path: &Path) -> Result<(Arc<Presheaf>, Vec<InputDigest>)> {
    let (text, digest) = read_file(path)?;
    let raw: RawPresheaf = parse_json(path, &text)?;
    let cat_path = resolve_ref(path, &raw.category);
    let (cat, mut digests) = load_category(&cat_path)?;
    let p = Arc::new(validate_presheaf(&cat, &raw)?);
    digests.insert(0, digest);
    Ok((p, digests))
}

pub fn load_hom(path: &Path) -> Result<(Hom, Vec<InputDigest>)> {
    let (text, digest) = read_file(path)?;
    let raw: RawHom = parse_json(path, &text)?;
    let (source, src_digests) = load_presheaf(&resolve_ref(path, &raw.source))?;
    let (target, tgt_digests) = load_presheaf(&resolve_ref(path, &raw.target))?;
    let hom = validate_hom(&raw.map, &source, &target)?;
    let mut digests = vec![digest];
    digests.extend(src_digests);
    digests.extend(tgt_digests);
    Ok((hom, digests))
}

/// Wire format of a commuting square: four presheaf files and the four
/// leg maps between them.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RawSquare {
    #[serde(rename = "K")]
    pub k: String,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "L")]
    pub l: String,
    #[serde(rename = "kA")]
    pub ka: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(rename = "kB")]
    pub kb: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(rename = "aL")]
    pub al: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(rename = "bL")]
    pub bl: BTreeMap<String, BTreeMap<String, String>>,
}

pub fn load_square(path: &Path) -> Result<(Square, Vec<InputDigest>)> {
    let (text, digest) = read_file(path)?;
    let raw: RawSquare = parse_json(path, &text)?;
    let mut digests = vec![digest];
    let mut load = |reference: &str| -> Result<Arc<Presheaf>> {
        let (p, d) = load_presheaf(&resolve_ref(path, reference))?;
        digests.extend(d);
        Ok(p)
    };
    let k = load(&raw.k)?;
    let a = load(&raw.a)?;
    let b = load(&raw.b)?;
    let l = load(&raw.l)?;
    let ka = validate_hom(&raw.ka, &k, &a)?;
    let kb = validate_hom(&raw.kb, &k, &b)?;
    let al = validate_hom(&raw.al, &a, &l)?;
    let bl = validate_hom(&raw.bl, &b, &l)?;
    let square = Square::new(ka, kb, al, bl)?;
    Ok((square, digests))
}

/// Loads an equation system against an already-loaded presheaf providing
/// sorts and anchor parameters.
pub fn load_system(path: &Path, m: &Presheaf) -> Result<(EqSystem, Vec<InputDigest>)> {
    let (text, digest) = read_file(path)?;
    let raw: RawEqSystem = parse_json(path, &text)?;
    Ok((EqSystem::from_raw(m, &raw)?, vec![digest]))
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct TraceManifestStage {
    pub index: [usize; 2],
    pub size: usize,
    pub presheaf: String,
    /// Map file from the previous stage; absent for the base stage.
    pub link: Option<String>,
    /// Map file embedding the seed presheaf.
    pub v: String,
}

/// Manifest of a serialized chain trace directory.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct TraceManifest {
    pub depth: usize,
    pub category: String,
    pub stages: Vec<TraceManifestStage>,
    pub a: Vec<String>,
    pub b: Vec<String>,
    /// Keyed "n,m"; values are qualified element names.
    pub c: BTreeMap<String, String>,
}

/// Writes a trace as a self-contained directory: the category, one
/// presheaf file per stage, link and embedding maps, and manifest.json.
pub fn write_trace_dir(trace: &ChainTrace, dir: &Path) -> Result<TraceManifest> {
    fs::create_dir_all(dir)
        .map_err(|e| Error::Io { path: dir.display().to_string(), detail: e.to_string() })?;
    let cat_file = "category.cat.json".to_string();
    write_json(&dir.join(&cat_file), &trace.seed.k.cat().to_raw())?;

    let stage_file = |n: usize, m: usize| format!("stage_{n}_{m}.psh.json");
    let mut stages = Vec::new();
    for (i, stage) in trace.stages.iter().enumerate() {
        let (n, m) = stage.index;
        let psh = stage_file(n, m);
        write_json(&dir.join(&psh), &stage.presheaf.to_raw(&cat_file))?;
        let link = stage.link.as_ref().map(|link| {
            let (pn, pm) = trace.stages[i - 1].index;
            let name = format!("link_{n}_{m}.hom.json");
            (name, link.to_raw(&stage_file(pn, pm), &psh))
        });
        if let Some((name, raw)) = &link {
            write_json(&dir.join(name), raw)?;
        }
        let v_name = format!("v_{n}_{m}.hom.json");
        write_json(&dir.join(&v_name), &stage.v.to_raw(&stage_file(0, 0), &psh))?;
        stages.push(TraceManifestStage {
            index: [n, m],
            size: stage.presheaf.size(),
            presheaf: psh,
            link: link.map(|(name, _)| name),
            v: v_name,
        });
    }

    let fin = trace.final_stage();
    let manifest = TraceManifest {
        depth: trace.depth,
        category: cat_file,
        stages,
        a: (0..trace.depth).map(|n| fin.qualified(trace.a_elem(n))).collect(),
        b: (0..trace.depth).map(|m| fin.qualified(trace.b_elem(m))).collect(),
        c: trace
            .c_marks
            .keys()
            .map(|&(n, m)| (format!("{n},{m}"), fin.qualified(trace.c_elem(n, m))))
            .collect(),
    };
    write_json(&dir.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::witness::build_chain;

    #[test]
    fn canonical_serialization_round_trips_a_category() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("span.cat.json");
        let cat = fixtures::span_cat();
        write_json(&path, &cat.to_raw()).unwrap();
        let (loaded, digests) = load_category(&path).unwrap();
        assert_eq!(loaded.as_ref(), &cat);
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(canonical_json(&loaded.to_raw()), text);
        assert_eq!(digests[0].sha256, sha256_hex(text.as_bytes()));
    }

    #[test]
    fn presheaf_files_resolve_their_category_reference() {
        let dir = tempfile::tempdir().unwrap();
        write_json(&dir.path().join("span.cat.json"), &fixtures::span_cat().to_raw()).unwrap();
        let rep = fixtures::rep_z();
        let p_path = dir.path().join("rep_z.psh.json");
        write_json(&p_path, &rep.to_raw("span.cat.json")).unwrap();
        let (loaded, digests) = load_presheaf(&p_path).unwrap();
        assert_eq!(loaded.as_ref(), &rep);
        assert_eq!(digests.len(), 2);
    }

    #[test]
    fn missing_and_malformed_files_are_distinguished() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("absent.json");
        assert!(matches!(load_category(&missing), Err(Error::FileNotFound(_))));
        let bad = dir.path().join("bad.json");
        fs::write(&bad, "{not json").unwrap();
        assert!(matches!(load_category(&bad), Err(Error::MalformedJson { .. })));
    }

    #[test]
    fn fixtures_env_var_is_a_fallback_for_references() {
        let fixture_dir = tempfile::tempdir().unwrap();
        write_json(&fixture_dir.path().join("span.cat.json"), &fixtures::span_cat().to_raw())
            .unwrap();
        let work = tempfile::tempdir().unwrap();
        let p_path = work.path().join("rep_z.psh.json");
        write_json(&p_path, &fixtures::rep_z().to_raw("span.cat.json")).unwrap();
        // Serialized env access; tests in this module run in one process.
        std::env::set_var("PURELAB_FIXTURES", fixture_dir.path());
        let result = load_presheaf(&p_path);
        std::env::remove_var("PURELAB_FIXTURES");
        assert!(result.is_ok());
    }

    #[test]
    fn hom_files_load_and_validate() {
        let dir = tempfile::tempdir().unwrap();
        write_json(&dir.path().join("span.cat.json"), &fixtures::span_cat().to_raw()).unwrap();
        let rep = Arc::new(fixtures::rep_z());
        write_json(&dir.path().join("rep_z.psh.json"), &rep.to_raw("span.cat.json")).unwrap();
        let ident = Hom::identity(&rep);
        let h_path = dir.path().join("ident.hom.json");
        write_json(&h_path, &ident.to_raw("rep_z.psh.json", "rep_z.psh.json")).unwrap();
        let (hom, _) = load_hom(&h_path).unwrap();
        assert!(hom.is_mono());
        assert_eq!(hom.source().as_ref(), rep.as_ref());
    }

    #[test]
    fn square_files_reassemble_the_three_chains_square() {
        let dir = tempfile::tempdir().unwrap();
        let sq = fixtures::three_chains_square();
        write_json(&dir.path().join("chain3.cat.json"), &sq.l.cat().to_raw()).unwrap();
        for (name, p) in [("k", &sq.k), ("a", &sq.a), ("b", &sq.b), ("l", &sq.l)] {
            write_json(&dir.path().join(format!("{name}.psh.json")), &p.to_raw("chain3.cat.json"))
                .unwrap();
        }
        let raw = RawSquare {
            k: "k.psh.json".into(),
            a: "a.psh.json".into(),
            b: "b.psh.json".into(),
            l: "l.psh.json".into(),
            ka: sq.ka.to_raw("", "").map,
            kb: sq.kb.to_raw("", "").map,
            al: sq.al.to_raw("", "").map,
            bl: sq.bl.to_raw("", "").map,
        };
        let sq_path = dir.path().join("square.json");
        write_json(&sq_path, &raw).unwrap();
        let (loaded, digests) = load_square(&sq_path).unwrap();
        assert_eq!(loaded.l.as_ref(), sq.l.as_ref());
        assert_eq!(loaded.ka, sq.ka);
        // square + 4 presheaves + 4 category loads
        assert_eq!(digests.len(), 9);
    }

    #[test]
    fn trace_directories_contain_loadable_stages() {
        let rep = Arc::new(fixtures::rep_z());
        let cat = rep.cat().clone();
        let x = cat.object_id("X").unwrap();
        let y = cat.object_id("Y").unwrap();
        let z = cat.object_id("Z").unwrap();
        let trace = build_chain(
            &rep,
            rep.elem(x, "f").unwrap(),
            rep.elem(y, "g").unwrap(),
            rep.elem(z, "id_Z").unwrap(),
            cat.arrow_id("f").unwrap(),
            cat.arrow_id("g").unwrap(),
            2,
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let manifest = write_trace_dir(&trace, dir.path()).unwrap();
        assert_eq!(manifest.stages.len(), 3);
        assert_eq!(manifest.a, vec!["X:f", "X:f@1,0"]);
        for stage in &manifest.stages {
            let (p, _) = load_presheaf(&dir.path().join(&stage.presheaf)).unwrap();
            assert_eq!(p.size(), stage.size);
            let (v, _) = load_hom(&dir.path().join(&stage.v)).unwrap();
            assert!(v.is_mono());
            if let Some(link) = &stage.link {
                let (link, _) = load_hom(&dir.path().join(link)).unwrap();
                assert!(link.is_mono());
            }
        }
        let reread: TraceManifest = parse_json(
            &dir.path().join("manifest.json"),
            &fs::read_to_string(dir.path().join("manifest.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(reread, manifest);
    }
}
