//! JSON file formats. Every top-level document carries `schema_version`.

use std::fs;
use std::path::Path;

use multicomp_core::{
    build_codebook, BinaryString, Codebook, Composition, CompositionMultiset, ConfusabilityWitness, Flavor,
    LayoutParams, MixtureDocument,
};
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const PRNG_NAME: &str = "splitmix64";

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LayoutJson {
    pub n: usize,
    pub block_len: usize,
    pub lead_run: usize,
    pub v_len: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub parity_fix: bool,
}

impl From<&LayoutParams> for LayoutJson {
    fn from(l: &LayoutParams) -> Self {
        LayoutJson {
            n: l.n,
            block_len: l.block_len,
            lead_run: l.lead_run,
            v_len: l.v_len,
            big_n: l.big_n,
            parity_fix: l.parity_fix,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CodebookFile {
    pub schema_version: u32,
    pub h: usize,
    pub m: u32,
    pub primitive_poly: String,
    /// Length of the unpadded columns, `h * m`.
    pub n: usize,
    pub strings: Vec<String>,
    pub layout: LayoutJson,
    pub codewords: Vec<String>,
}

impl CodebookFile {
    pub fn from_codebook(cb: &Codebook) -> Self {
        CodebookFile {
            schema_version: SCHEMA_VERSION,
            h: cb.h(),
            m: cb.m(),
            primitive_poly: cb.field().poly_bits().to_string(),
            n: cb.raw().n(),
            strings: cb.raw().strings().iter().map(ToString::to_string).collect(),
            layout: cb.layout().into(),
            codewords: cb.codewords().iter().map(ToString::to_string).collect(),
        }
    }

    /// Rebuilds the codebook from `(m, h)` and rejects any field that differs.
    pub fn to_codebook(&self) -> CliResult<Codebook> {
        check_version(self.schema_version)?;
        let cb = build_codebook(self.m, self.h)?;
        let expected = CodebookFile::from_codebook(&cb);
        let mismatch = [
            ("primitive_poly", self.primitive_poly != expected.primitive_poly),
            ("n", self.n != expected.n),
            ("strings", self.strings != expected.strings),
            ("layout", self.layout != expected.layout),
            ("codewords", self.codewords != expected.codewords),
        ]
        .into_iter()
        .find(|(_, differs)| *differs);
        if let Some((field, _)) = mismatch {
            return Err(CliError::Invalid(format!(
                "codebook file field `{field}` does not match the construction for m={} h={}",
                self.m, self.h
            )));
        }
        Ok(cb)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EntryJson {
    pub len: usize,
    pub ones: usize,
    pub count: usize,
}

/// Canonical mixture: entries sorted by `(len, ones)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MixtureFile {
    pub schema_version: u32,
    #[serde(rename = "N")]
    pub n_total: usize,
    pub hmax: usize,
    pub entries: Vec<EntryJson>,
}

/// Flat readout in pseudo-random order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ShuffledReadout {
    pub schema_version: u32,
    #[serde(rename = "N")]
    pub n_total: usize,
    pub hmax: usize,
    pub seed: u64,
    pub prng: String,
    pub readout: Vec<String>,
}

impl MixtureFile {
    pub fn from_document(doc: &MixtureDocument) -> Self {
        MixtureFile {
            schema_version: SCHEMA_VERSION,
            n_total: doc.n_total(),
            hmax: doc.hmax(),
            entries: doc
                .entries()
                .iter()
                .map(|(c, count)| EntryJson {
                    len: c.len(),
                    ones: c.ones() as usize,
                    count,
                })
                .collect(),
        }
    }

    pub fn to_document(&self) -> CliResult<MixtureDocument> {
        check_version(self.schema_version)?;
        let mut entries = CompositionMultiset::new();
        for e in &self.entries {
            if e.count == 0 {
                return Err(CliError::Invalid(format!(
                    "entry ({}, {}) has count 0",
                    e.len, e.ones
                )));
            }
            entries.insert_many(Composition::with_len(e.len, e.ones)?, e.count);
        }
        Ok(MixtureDocument::new(self.n_total, self.hmax, entries)?)
    }
}

impl ShuffledReadout {
    /// Canonical flat order, then a Fisher-Yates pass drawing `next_u64() % (i + 1)`
    /// for `i` from the last index down to 1.
    pub fn from_document(doc: &MixtureDocument, seed: u64) -> Self {
        let mut readout: Vec<String> = doc.entries().iter_flat().map(|c| c.to_string()).collect();
        let mut rng = SplitMix64::seed_from_u64(seed);
        for i in (1..readout.len()).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            readout.swap(i, j);
        }
        ShuffledReadout {
            schema_version: SCHEMA_VERSION,
            n_total: doc.n_total(),
            hmax: doc.hmax(),
            seed,
            prng: PRNG_NAME.into(),
            readout,
        }
    }

    pub fn to_document(&self) -> CliResult<MixtureDocument> {
        check_version(self.schema_version)?;
        let entries = self
            .readout
            .iter()
            .map(|s| s.parse::<Composition>())
            .collect::<Result<CompositionMultiset, _>>()?;
        Ok(MixtureDocument::new(self.n_total, self.hmax, entries)?)
    }
}

/// Either mixture form; the shuffled one is recognized by its `readout` key.
#[derive(Clone, PartialEq, Eq, Debug, Deserialize)]
#[serde(untagged)]
pub enum AnyMixture {
    Shuffled(ShuffledReadout),
    Canonical(MixtureFile),
}

impl AnyMixture {
    pub fn to_document(&self) -> CliResult<MixtureDocument> {
        match self {
            AnyMixture::Shuffled(s) => s.to_document(),
            AnyMixture::Canonical(c) => c.to_document(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WitnessJson {
    pub flavor: String,
    pub set_a: Vec<String>,
    pub set_b: Vec<String>,
}

impl From<&ConfusabilityWitness> for WitnessJson {
    fn from(w: &ConfusabilityWitness) -> Self {
        let text = |set: &[BinaryString]| set.iter().map(ToString::to_string).collect();
        WitnessJson {
            flavor: match w.flavor {
                Flavor::Full => "full",
                Flavor::PrefixOnly => "prefix_only",
            }
            .into(),
            set_a: text(&w.set_a),
            set_b: text(&w.set_b),
        }
    }
}

fn check_version(found: u32) -> CliResult<()> {
    if found != SCHEMA_VERSION {
        return Err(CliError::Invalid(format!(
            "unsupported schema_version {found}, expected {SCHEMA_VERSION}"
        )));
    }
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Json(path.display().to_string(), e))
}

pub fn load_codebook(path: &Path) -> CliResult<Codebook> {
    read_json::<CodebookFile>(path)?.to_codebook()
}

pub fn load_mixture(path: &Path) -> CliResult<MixtureDocument> {
    read_json::<AnyMixture>(path)?.to_document()
}

#[cfg(test)]
mod tests {
    use super::*;
    use multicomp_core::mix;

    fn doc() -> MixtureDocument {
        let cb = build_codebook(3, 2).unwrap();
        mix(&[cb.codewords()[1].clone(), cb.codewords()[4].clone()], 2).unwrap()
    }

    #[test]
    fn splitmix_matches_reference_stream() {
        // First outputs of the reference splitmix64 with state 0.
        let mut rng = SplitMix64::seed_from_u64(0);
        assert_eq!(rng.next_u64(), 0xe220a8397b1dcdaf);
        assert_eq!(rng.next_u64(), 0x6e789e6aa1b965f4);
    }

    #[test]
    fn mixture_round_trips() {
        let d = doc();
        let canon = MixtureFile::from_document(&d);
        assert_eq!(canon.to_document().unwrap(), d);
        let text = to_json(&canon);
        let back: AnyMixture = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_document().unwrap(), d);
    }

    #[test]
    fn shuffle_is_a_permutation_and_seeded() {
        let d = doc();
        let a = ShuffledReadout::from_document(&d, 1);
        let b = ShuffledReadout::from_document(&d, 2);
        assert_ne!(a.readout, b.readout);
        assert_eq!(a, ShuffledReadout::from_document(&d, 1));
        assert_eq!(a.to_document().unwrap(), d);
        assert_eq!(b.to_document().unwrap(), d);
        let back: AnyMixture = serde_json::from_str(&to_json(&a)).unwrap();
        assert!(matches!(back, AnyMixture::Shuffled(_)));
    }

    #[test]
    fn codebook_file_round_trips_and_rejects_edits() {
        let cb = build_codebook(3, 2).unwrap();
        let file = CodebookFile::from_codebook(&cb);
        assert_eq!(file.primitive_poly, "1011");
        assert_eq!(file.n, 6);
        assert_eq!(file.strings.len(), 7);
        assert_eq!(file.to_codebook().unwrap().codewords(), cb.codewords());
        let mut bad = file.clone();
        bad.codewords.swap(0, 1);
        assert!(bad.to_codebook().unwrap_err().to_string().contains("codewords"));
        let mut old = file;
        old.schema_version = 0;
        assert!(old.to_codebook().is_err());
    }

    #[test]
    fn zero_count_entry_rejected() {
        let mut file = MixtureFile::from_document(&doc());
        file.entries[0].count = 0;
        assert!(file.to_document().is_err());
    }
}
