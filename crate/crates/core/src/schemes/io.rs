//! JSON formats for schemes and share transcripts.

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Serialize};

use super::{LinearScheme, SeedBlock};
use crate::gf2::{BitMatrix, BitVector};
use crate::{Error, Result, SCHEMA_VERSION};

/// A matrix as dimensions plus base64 of its row-major bits (MSB first in each byte).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub bits: String,
}

impl From<&BitMatrix> for MatrixFile {
    fn from(m: &BitMatrix) -> Self {
        MatrixFile { rows: m.rows(), cols: m.cols(), bits: STANDARD.encode(m.to_bytes()) }
    }
}

impl MatrixFile {
    fn decode(&self) -> Result<BitMatrix> {
        let bytes = STANDARD.decode(&self.bits).map_err(|e| Error::Parse(format!("base64: {e}")))?;
        BitMatrix::from_bytes(self.rows, self.cols, &bytes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeFile {
    pub schema_version: u32,
    pub seed_dim: usize,
    pub secret_dim: usize,
    pub secret_map: MatrixFile,
    pub share_maps: Vec<MatrixFile>,
    #[serde(default)]
    pub manifest: Vec<SeedBlock>,
}

impl From<&LinearScheme> for SchemeFile {
    fn from(s: &LinearScheme) -> Self {
        SchemeFile {
            schema_version: SCHEMA_VERSION,
            seed_dim: s.seed_dim(),
            secret_dim: s.secret_dim(),
            secret_map: s.secret_map().into(),
            share_maps: s.share_maps().iter().map(MatrixFile::from).collect(),
            manifest: s.manifest().to_vec(),
        }
    }
}

fn check_version(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema version {v}")));
    }
    Ok(())
}

impl SchemeFile {
    pub fn into_scheme(self) -> Result<LinearScheme> {
        check_version(self.schema_version)?;
        let k = self.secret_map.decode()?;
        if k.cols() != self.seed_dim || k.rows() != self.secret_dim {
            return Err(Error::Parse("secret map dimensions disagree with header".into()));
        }
        let shares = self.share_maps.iter().map(MatrixFile::decode).collect::<Result<Vec<_>>>()?;
        LinearScheme::new(k, shares, self.manifest)
    }
}

pub fn scheme_to_json(s: &LinearScheme) -> String {
    serde_json::to_string(&SchemeFile::from(s)).expect("scheme serializes")
}

pub fn scheme_from_json(text: &str) -> Result<LinearScheme> {
    serde_json::from_str::<SchemeFile>(text)?.into_scheme()
}

/// One participant's share as a `0`/`1` string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareEntry {
    pub participant: usize,
    pub bits: String,
}

/// Shares produced by one deal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub schema_version: u32,
    pub secret_dim: usize,
    /// Seed of the random generator used for the deal, if recorded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
    pub shares: Vec<ShareEntry>,
}

impl Transcript {
    pub fn new(secret_dim: usize, rng_seed: Option<u64>, shares: &[BitVector]) -> Self {
        Transcript {
            schema_version: SCHEMA_VERSION,
            secret_dim,
            rng_seed,
            shares: shares
                .iter()
                .enumerate()
                .map(|(p, b)| ShareEntry { participant: p, bits: b.to_string() })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: Transcript = serde_json::from_str(text)?;
        check_version(t.schema_version)?;
        Ok(t)
    }

    /// Participants present, as a mask, with their shares in increasing order.
    pub fn subset_and_shares(&self) -> Result<(crate::structures::Subset, Vec<BitVector>)> {
        let mut entries: Vec<&ShareEntry> = self.shares.iter().collect();
        entries.sort_by_key(|e| e.participant);
        if entries.windows(2).any(|w| w[0].participant == w[1].participant) {
            return Err(Error::Parse("duplicate participant in transcript".into()));
        }
        if let Some(e) = entries.iter().find(|e| e.participant >= crate::structures::MAX_PARTICIPANTS) {
            return Err(Error::Parse(format!("participant {} out of range", e.participant)));
        }
        let subset = crate::structures::subset_of(entries.iter().map(|e| e.participant));
        let shares = entries.iter().map(|e| BitVector::parse(&e.bits)).collect::<Result<Vec<_>>>()?;
        Ok((subset, shares))
    }
}
