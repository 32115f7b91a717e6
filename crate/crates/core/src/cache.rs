//! Result cache keyed by representation content, not by descriptor spelling:
//! two descriptors building the same generators over the same field hit the
//! same entry. Activated by the ORBDIAM_CACHE environment variable naming a
//! directory; without it every call recomputes.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::repfactory::GroupRep;

pub const ENV_VAR: &str = "ORBDIAM_CACHE";

/// Content hash over (field spec, dim, sorted canonical generator encodings).
pub fn cache_key(rep: &GroupRep) -> String {
    let mut gens: Vec<String> = rep
        .gens
        .iter()
        .map(|g| {
            let mut s = String::new();
            for i in 0..g.rows {
                for j in 0..g.cols {
                    if !s.is_empty() {
                        s.push(',');
                    }
                    s.push_str(&g.get(i, j).to_string());
                }
            }
            s
        })
        .collect();
    gens.sort_unstable();
    let modulus: Vec<String> = rep.field.modulus().iter().map(|c| c.to_string()).collect();
    let canonical = format!(
        "p={};k={};modulus={};n={};gens={}",
        rep.field.p(),
        rep.field.k(),
        modulus.join(","),
        rep.n,
        gens.join("|"),
    );
    let mut h = Sha256::new();
    h.update(canonical.as_bytes());
    format!("{:x}", h.finalize())
}

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(ENV_VAR).map(PathBuf::from)
}

fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.json"))
}

pub fn lookup_in(dir: &Path, key: &str) -> Option<String> {
    fs::read_to_string(entry_path(dir, key)).ok()
}

pub fn store_in(dir: &Path, key: &str, contents: &str) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    // write-then-rename so a concurrent reader never sees a partial entry
    let tmp = dir.join(format!(".{key}.tmp.{}", std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, entry_path(dir, key))
}

/// Cached bytes for this key when the cache is enabled.
pub fn lookup(key: &str) -> Option<String> {
    lookup_in(&cache_dir()?, key)
}

/// Stores when the cache is enabled; a disabled cache is not an error.
pub fn store(key: &str, contents: &str) -> io::Result<()> {
    match cache_dir() {
        Some(dir) => store_in(&dir, key, contents),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::Descriptor;

    #[test]
    fn key_ignores_descriptor_spelling_and_generator_order() {
        let a = Descriptor::parse("fdpm:r=6,q=2").unwrap().build().unwrap();
        let mut b = a.clone();
        b.descriptor = "renamed".into();
        b.gens.reverse();
        assert_eq!(cache_key(&a), cache_key(&b));

        let c = Descriptor::parse("fdpm:r=7,q=2").unwrap().build().unwrap();
        assert_ne!(cache_key(&a), cache_key(&c));

        let d = Descriptor::parse("fdpm:r=6,q=3").unwrap().build().unwrap();
        assert_ne!(cache_key(&a), cache_key(&d));
    }

    #[test]
    fn roundtrip_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let key = "0123abcd";
        assert!(lookup_in(dir.path(), key).is_none());
        let body = "{\n  \"x\": 1\n}\n";
        store_in(dir.path(), key, body).unwrap();
        assert_eq!(lookup_in(dir.path(), key).as_deref(), Some(body));
        // overwrite wins
        store_in(dir.path(), key, "{}").unwrap();
        assert_eq!(lookup_in(dir.path(), key).as_deref(), Some("{}"));
    }
}
