//! JSON schemas for system configs, signal files and coefficient files,
//! plus the conversions to and from the core types.
//!
//! Lattice parameters are integers and complex values are `[re, im]`
//! pairs, so nothing exact is lost at the ingestion boundary. Canonical
//! emission is pretty-printed JSON with struct field order; loading a
//! canonical emission re-produces it byte for byte.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use nugabor_core::gabor::GaborSpec;
use nugabor_core::lambda::{LambdaParams, LambdaPoint};
use nugabor_core::sequences::NuSequence;
use nugabor_core::CoefficientMap;

pub type ComplexPair = [f64; 2];

fn to_complex(p: ComplexPair) -> num_complex::Complex64 {
    num_complex::Complex64::new(p[0], p[1])
}

fn from_complex(z: num_complex::Complex64) -> ComplexPair {
    [z.re, z.im]
}

/// One support entry of a window or signal: the point (n, eps) and its
/// S-component value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupportEntry {
    pub n: i64,
    pub eps: u8,
    pub value: Vec<ComplexPair>,
}

impl SupportEntry {
    fn point(&self) -> Result<LambdaPoint> {
        match self.eps {
            0 => Ok(LambdaPoint::new(self.n, false)),
            1 => Ok(LambdaPoint::new(self.n, true)),
            other => bail!("entry at n = {}: eps must be 0 or 1, got {other}", self.n),
        }
    }
}

/// The on-disk description of a Gabor system.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemConfig {
    #[serde(rename = "N")]
    pub n: i64,
    pub r: i64,
    #[serde(rename = "M")]
    pub m: i64,
    #[serde(rename = "P")]
    pub p: i64,
    #[serde(rename = "S")]
    pub s: usize,
    pub windows: Vec<Vec<SupportEntry>>,
}

impl SystemConfig {
    pub fn to_spec(&self) -> Result<GaborSpec> {
        let params = LambdaParams::new(self.n, self.r)
            .with_context(|| format!("invalid lattice parameters N = {}, r = {}", self.n, self.r))?;
        if self.p < 0 {
            bail!("P must be nonnegative, got {}", self.p);
        }
        if self.windows.len() as i64 != self.p + 1 {
            bail!(
                "windows: expected P + 1 = {} windows, found {}",
                self.p + 1,
                self.windows.len()
            );
        }
        if self.s < 1 {
            bail!("S must be a positive integer, got {}", self.s);
        }
        let mut windows = Vec::with_capacity(self.windows.len());
        for (j, entries) in self.windows.iter().enumerate() {
            let mut pairs = Vec::with_capacity(entries.len());
            for e in entries {
                if e.value.len() != self.s {
                    bail!(
                        "windows[{j}], entry at (n = {}, eps = {}): value has {} components, expected S = {}",
                        e.n,
                        e.eps,
                        e.value.len(),
                        self.s
                    );
                }
                pairs.push((e.point()?, e.value.iter().copied().map(to_complex).collect()));
            }
            windows.push(
                NuSequence::from_entries(params, self.s, pairs)
                    .with_context(|| format!("windows[{j}]"))?,
            );
        }
        GaborSpec::new(params, self.m, windows).map_err(|e| anyhow::anyhow!("{e}"))
    }

    pub fn from_spec(spec: &GaborSpec) -> Self {
        SystemConfig {
            n: spec.params().n(),
            r: spec.params().r(),
            m: spec.m_count(),
            p: spec.p_max(),
            s: spec.dim(),
            windows: spec
                .windows()
                .iter()
                .map(|w| sequence_entries(w))
                .collect(),
        }
    }

    /// Canonical serialization: pretty JSON, struct field order, one
    /// trailing newline.
    pub fn canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    /// SHA-256 of the canonical serialization, hex-encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

fn sequence_entries(seq: &NuSequence) -> Vec<SupportEntry> {
    seq.iter()
        .map(|(pt, v)| SupportEntry {
            n: pt.n,
            eps: pt.eps as u8,
            value: v.iter().copied().map(from_complex).collect(),
        })
        .collect()
}

/// A signal file: one finitely supported sequence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignalFile {
    #[serde(rename = "S")]
    pub s: usize,
    pub entries: Vec<SupportEntry>,
}

impl SignalFile {
    pub fn to_sequence(&self, params: LambdaParams) -> Result<NuSequence> {
        let mut pairs = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            if e.value.len() != self.s {
                bail!(
                    "entry at (n = {}, eps = {}): value has {} components, expected S = {}",
                    e.n,
                    e.eps,
                    e.value.len(),
                    self.s
                );
            }
            pairs.push((e.point()?, e.value.iter().copied().map(to_complex).collect()));
        }
        NuSequence::from_entries(params, self.s, pairs).map_err(|e| anyhow::anyhow!("{e}"))
    }

    pub fn from_sequence(seq: &NuSequence) -> Self {
        SignalFile {
            s: seq.dim(),
            entries: sequence_entries(seq),
        }
    }
}

/// One analysis coefficient ⟨Z, E_{m/M}R_{2Nλ}W_j⟩ at (λ, m, j).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub n: i64,
    pub eps: u8,
    pub m: i64,
    pub j: i64,
    pub value: ComplexPair,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientFile {
    pub entries: Vec<CoefficientEntry>,
}

impl CoefficientFile {
    pub fn to_map(&self) -> Result<CoefficientMap> {
        let mut map = CoefficientMap::new();
        for e in &self.entries {
            let pt = match e.eps {
                0 => LambdaPoint::new(e.n, false),
                1 => LambdaPoint::new(e.n, true),
                other => bail!("coefficient at n = {}: eps must be 0 or 1, got {other}", e.n),
            };
            map.insert(pt, e.m, e.j, to_complex(e.value));
        }
        Ok(map)
    }

    pub fn from_map(map: &CoefficientMap) -> Self {
        CoefficientFile {
            entries: map
                .iter()
                .map(|((pt, m, j), c)| CoefficientEntry {
                    n: pt.n,
                    eps: pt.eps as u8,
                    m: *m,
                    j: *j,
                    value: from_complex(*c),
                })
                .collect(),
        }
    }
}
