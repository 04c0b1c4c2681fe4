//! File-backed sequent cache. One `lhs<TAB>rhs<TAB>bool` line per decided
//! query, under a header naming the decider version that produced them.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use ordrefl_core::formula::{parse_formula_exact, Decider, DECIDER_VERSION};
use thiserror::Error;

const HEADER: &str = "# ordrefl sequent cache";

#[derive(Debug, Error)]
#[error("sequent cache {path}: {source}")]
pub struct CacheError {
    path: PathBuf,
    #[source]
    source: io::Error,
}

/// Seeds `dec` from `path`. A missing file, or one written by another
/// decider version, contributes nothing. Returns the number of entries read.
pub fn load(path: &Path, dec: &mut Decider) -> Result<usize, CacheError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(0),
        Err(source) => return Err(CacheError { path: path.to_path_buf(), source }),
    };
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    if lines.next() != Some(&format!("version={DECIDER_VERSION}")) {
        return Ok(0);
    }
    let mut count = 0;
    for line in lines {
        let mut fields = line.split('\t');
        let (Some(lhs), Some(rhs), Some(value), None) = (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            continue;
        };
        let (Ok(lhs), Ok(rhs), Ok(value)) = (parse_formula_exact(lhs), parse_formula_exact(rhs), value.parse()) else {
            continue;
        };
        dec.remember(&lhs, &rhs, value);
        count += 1;
    }
    Ok(count)
}

/// Writes every settled query of `dec` to `path`, sorted, replacing the file.
pub fn save(path: &Path, dec: &Decider) -> Result<(), CacheError> {
    let err = |source| CacheError { path: path.to_path_buf(), source };
    let mut rows: Vec<String> = dec.decided().map(|(l, r, v)| format!("{l}\t{r}\t{v}")).collect();
    rows.sort();
    let tmp = path.with_extension("tmp");
    let mut out = io::BufWriter::new(fs::File::create(&tmp).map_err(err)?);
    writeln!(out, "{HEADER}\nversion={DECIDER_VERSION}").map_err(err)?;
    for row in rows {
        writeln!(out, "{row}").map_err(err)?;
    }
    out.into_inner().map_err(|e| err(e.into_error()))?.sync_all().map_err(err)?;
    fs::rename(&tmp, path).map_err(err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ordrefl_core::formula::parse_formula;

    #[test]
    fn round_trips_and_respects_version() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("seq.cache");
        let mut dec = Decider::new();
        let (a, b) = (parse_formula("<1><0>T").unwrap(), parse_formula("<0><0>T").unwrap());
        assert!(dec.derives(&a, &b));
        save(&path, &dec).unwrap();

        let mut fresh = Decider::new();
        assert_eq!(load(&path, &mut fresh).unwrap(), dec.cache_len());
        assert_eq!(fresh.cache_len(), dec.cache_len());
        assert!(fresh.derives(&a, &b));

        fs::write(&path, "version=other\n<0>T\t<0>T\tfalse\n").unwrap();
        let mut stale = Decider::new();
        assert_eq!(load(&path, &mut stale).unwrap(), 0);
        assert_eq!(load(&dir.path().join("missing"), &mut stale).unwrap(), 0);
    }
}
