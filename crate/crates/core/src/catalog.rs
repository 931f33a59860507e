//! Built-in conjugate pairs shipped as data files.

use std::path::Path;

use crate::conjugate_pair::{ConjugatePair, PairManifest};
use crate::error::{Error, Result};

macro_rules! entry {
    ($name:literal) => {
        (
            $name,
            include_str!(concat!("../data/pairs/", $name, ".json")),
            include_str!(concat!("../data/pairs/", $name, "_c1.mat")),
            include_str!(concat!("../data/pairs/", $name, "_c2.mat")),
        )
    };
}

// (name, manifest, C1 matrix, C2 matrix)
const ENTRIES: &[(&str, &str, &str, &str)] =
    &[entry!("steane"), entry!("four-two"), entry!("trivial"), entry!("gf4"), entry!("gf4-expanded")];

/// Names of the built-in pairs.
pub fn builtin_names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.0).collect()
}

/// The manifest text of a built-in pair.
pub fn builtin_manifest(name: &str) -> Result<&'static str> {
    find(name).map(|e| e.1)
}

fn find(name: &str) -> Result<&'static (&'static str, &'static str, &'static str, &'static str)> {
    ENTRIES
        .iter()
        .find(|e| e.0 == name)
        .ok_or_else(|| Error::DomainError(format!("no built-in pair named {name:?}")))
}

/// Loads a built-in pair by name.
pub fn builtin(name: &str) -> Result<ConjugatePair> {
    let (_, manifest, c1, c2) = find(name)?;
    let m: PairManifest =
        serde_json::from_str(manifest).map_err(|e| Error::Parse(format!("manifest: {e}")))?;
    m.resolve(|p: &Path| {
        if p == m.c1 {
            Ok(c1.to_string())
        } else if p == m.c2 {
            Ok(c2.to_string())
        } else {
            Err(Error::Io(format!("{} is not part of the built-in bundle", p.display())))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugate_pair::expand_pair;
    use crate::linear_codes::LinearCode;

    #[test]
    fn builtins_load() {
        let ks: Vec<usize> = builtin_names().iter().map(|n| builtin(n).unwrap().k()).collect();
        assert_eq!(ks, vec![1, 2, 2, 1, 2]);
    }

    #[test]
    fn steane_is_hamming() {
        let s = builtin("steane").unwrap();
        assert_eq!(s.c1(), &LinearCode::hamming_7_4());
    }

    #[test]
    fn expansion_matches_bundle() {
        assert_eq!(expand_pair(&builtin("gf4").unwrap()).unwrap(), builtin("gf4-expanded").unwrap());
    }

    #[test]
    fn unknown_name() {
        assert!(builtin("nope").is_err());
    }
}
