//! Persisted solver results, one JSON record per line.
//!
//! Only proven optima are stored. Each certificate is checked again when the
//! file is read; lines that fail to parse or verify are dropped and reported.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Certificate, ProofState, SolveResult};
use crate::coverage::{audit, has_property_sk};
use crate::error::{Error, Result};

pub const SOLVER_VERSION: &str = concat!("emcover-", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Problem {
    /// covering number, params `n, r`
    #[serde(rename = "D")]
    D,
    /// minimum covering hypergraph, params `n, k, r, s`
    #[serde(rename = "f")]
    F,
    /// minimum `S_k` digraph, params `n, k`
    #[serde(rename = "digraph")]
    Digraph,
    /// least order of an oriented `S_k` graph, params `k`
    #[serde(rename = "oriented")]
    Oriented,
}

impl Problem {
    fn param_names(self) -> &'static [&'static str] {
        match self {
            Problem::D => &["n", "r"],
            Problem::F => &["n", "k", "r", "s"],
            Problem::Digraph => &["n", "k"],
            Problem::Oriented => &["k"],
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::D => "D",
            Problem::F => "f",
            Problem::Digraph => "digraph",
            Problem::Oriented => "oriented",
        })
    }
}

pub type Params = BTreeMap<String, u64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub problem: Problem,
    pub params: Params,
    pub optimum: u64,
    pub certificate: Certificate,
    pub solver_version: String,
}

impl CacheRecord {
    /// Record for a finished solve; `None` unless the result is proven optimal.
    pub fn from_solve(problem: Problem, params: &[(&str, u64)], res: &SolveResult) -> Option<Self> {
        (res.proof_state == ProofState::Optimal).then(|| CacheRecord {
            problem,
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            optimum: res.optimum,
            certificate: res.certificate.clone(),
            solver_version: SOLVER_VERSION.to_string(),
        })
    }

    fn param(&self, name: &str) -> Result<u32> {
        let v = self.params.get(name).ok_or_else(|| {
            Error::Parse(format!("{} record lacks parameter {name}", self.problem))
        })?;
        u32::try_from(*v).map_err(|_| Error::Parse(format!("parameter {name}={v} out of range")))
    }

    /// Checks that the certificate witnesses the stored optimum.
    pub fn verify(&self) -> Result<()> {
        let names = self.problem.param_names();
        if self.params.len() != names.len() {
            return Err(Error::Parse(format!(
                "{} record expects parameters {names:?}",
                self.problem
            )));
        }
        let bad = |why: &str| {
            Err(Error::Parse(format!(
                "{} certificate rejected: {why}",
                self.problem
            )))
        };
        match (self.problem, &self.certificate) {
            (Problem::D, Certificate::Hypergraph(h)) => {
                let (n, r) = (self.param("n")?, self.param("r")?);
                if h.n() != n || h.r() != r || h.len() as u64 != self.optimum {
                    return bad("shape does not match parameters");
                }
                if !h.is_shadow_complete() {
                    return bad("shadow is incomplete");
                }
            }
            (Problem::F, Certificate::Hypergraph(h)) => {
                let (n, k, r, s) = (
                    self.param("n")?,
                    self.param("k")?,
                    self.param("r")?,
                    self.param("s")?,
                );
                if h.n() != n || h.r() != r || h.len() as u64 != self.optimum {
                    return bad("shape does not match parameters");
                }
                if !audit(h, k, s)?.covered {
                    return bad("an uncovered k-set exists");
                }
            }
            (Problem::Digraph, Certificate::Digraph(d)) => {
                let (n, k) = (self.param("n")?, self.param("k")?);
                if d.n() != n || d.arc_count() as u64 != self.optimum {
                    return bad("shape does not match parameters");
                }
                if !has_property_sk(d, k)?.holds {
                    return bad("property fails");
                }
            }
            (Problem::Oriented, Certificate::Digraph(d)) => {
                let k = self.param("k")?;
                if d.n() as u64 != self.optimum || !d.is_antisymmetric() {
                    return bad("not an oriented graph of the stored order");
                }
                if !has_property_sk(d, k)?.holds {
                    return bad("property fails");
                }
            }
            _ => return bad("wrong certificate kind"),
        }
        Ok(())
    }

    fn key(&self) -> (Problem, Params) {
        (self.problem, self.params.clone())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub loaded: usize,
    /// 1-based line number and reason for each dropped line
    pub rejected: Vec<(usize, String)>,
}

#[derive(Clone, Debug, Default)]
pub struct ResultsCache {
    path: Option<PathBuf>,
    records: BTreeMap<(Problem, Params), CacheRecord>,
}

impl ResultsCache {
    /// An empty cache not tied to any file.
    pub fn in_memory() -> Self {
        ResultsCache::default()
    }

    /// Reads `path`; a missing file gives an empty cache.
    pub fn load(path: impl AsRef<Path>) -> Result<(Self, LoadReport)> {
        let path = path.as_ref();
        let mut cache = ResultsCache {
            path: Some(path.to_path_buf()),
            records: BTreeMap::new(),
        };
        let mut report = LoadReport::default();
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((cache, report)),
            Err(e) => return Err(e.into()),
        };
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parsed = serde_json::from_str::<CacheRecord>(line)
                .map_err(Error::from)
                .and_then(|rec| rec.verify().map(|_| rec));
            match parsed {
                Ok(rec) => {
                    cache.records.insert(rec.key(), rec);
                    report.loaded += 1;
                }
                Err(e) => report.rejected.push((i + 1, e.to_string())),
            }
        }
        Ok((cache, report))
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> impl Iterator<Item = &CacheRecord> {
        self.records.values()
    }

    pub fn lookup(&self, problem: Problem, params: &[(&str, u64)]) -> Option<&CacheRecord> {
        let params: Params = params.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        self.records.get(&(problem, params))
    }

    /// Stores a record after verifying it. Replaces any record with the same key.
    pub fn insert(&mut self, record: CacheRecord) -> Result<()> {
        record.verify()?;
        self.records.insert(record.key(), record);
        Ok(())
    }

    /// Drops records written by other solver versions; returns how many.
    pub fn gc(&mut self) -> usize {
        let before = self.records.len();
        self.records
            .retain(|_, r| r.solver_version == SOLVER_VERSION);
        before - self.records.len()
    }

    /// Rewrites the backing file (via a temporary file and rename).
    pub fn save(&self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension("tmp");
        {
            let mut f = std::io::BufWriter::new(fs::File::create(&tmp)?);
            for rec in self.records.values() {
                serde_json::to_writer(&mut f, rec)?;
                f.write_all(b"\n")?;
            }
            f.flush()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}
