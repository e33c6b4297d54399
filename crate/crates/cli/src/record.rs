//! The row type shared by every output format, and its JSONL, CSV and table
//! encodings.
//!
//! JSON integers stay numbers while they fit in an IEEE double exactly
//! (`|v| ≤ 2^53 − 1`) and become decimal strings beyond that. Readers accept
//! either form.

use std::io::{self, BufRead, Read, Write};

use clap::ValueEnum;
use lehmer_core::{Factorization, FamilyMember, Parity, SolutionRecord};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
    #[default]
    Table,
}

/// One solution or family member as written to disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputRecord {
    pub r: usize,
    #[serde(with = "json_int")]
    pub k: BigInt,
    #[serde(with = "parity_name")]
    pub parity: Parity,
    #[serde(with = "json_int::list")]
    pub bases: Vec<BigInt>,
    /// Empty means sporadic.
    pub families: Vec<String>,
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("record {index}: {reason}")]
    Invalid { index: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn invalid(index: usize, reason: impl ToString) -> RecordError {
    RecordError::Invalid {
        index,
        reason: reason.to_string(),
    }
}

fn parity_of(bases: &[BigInt]) -> Parity {
    if bases.iter().all(|b| b.is_odd()) {
        Parity::Odd
    } else {
        Parity::Even
    }
}

impl OutputRecord {
    pub fn new(k: BigInt, bases: Vec<BigInt>, families: Vec<String>) -> Self {
        Self {
            r: bases.len(),
            k,
            parity: parity_of(&bases),
            bases,
            families,
        }
    }

    /// Expands each `x^a` into `a` copies of `x`.
    pub fn from_member(member: &FamilyMember) -> Self {
        let bases = expand(&member.factorization);
        Self::new(member.k.clone(), bases, member.labels())
    }

    /// Structural invariants: `r` matches, bases sorted, parity agrees with
    /// the bases, and family labels survive the CSV cell encoding.
    pub fn check(&self) -> Result<(), String> {
        if self.r != self.bases.len() {
            return Err(format!("r = {} but {} bases", self.r, self.bases.len()));
        }
        if self.bases.windows(2).any(|w| w[0] > w[1]) {
            return Err("bases are not sorted nondecreasing".into());
        }
        if self.parity != parity_of(&self.bases) {
            return Err(format!("parity {} does not match the bases", self.parity));
        }
        if let Some(bad) = self
            .families
            .iter()
            .find(|l| l.is_empty() || l.contains(';'))
        {
            return Err(format!("bad family label {bad:?}"));
        }
        Ok(())
    }

    /// Back to a search record; needs every base ≥ 2 and `k` within `u64`.
    pub fn to_solution(&self) -> Result<SolutionRecord, String> {
        let k = u64::try_from(&self.k).map_err(|_| format!("k = {} is out of range", self.k))?;
        let bases = self
            .bases
            .iter()
            .map(|b| match BigUint::try_from(b) {
                Ok(u) if u >= BigUint::from(2u8) => Ok(u),
                _ => Err(format!("base {b} is below 2")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut record = SolutionRecord::new(k, bases);
        record.families = self.families.clone();
        Ok(record)
    }

    /// `x_1 · x_2 · … · x_r`
    pub fn factorization_text(&self) -> String {
        let parts: Vec<String> = self.bases.iter().map(BigInt::to_string).collect();
        parts.join(" · ")
    }
}

impl From<&SolutionRecord> for OutputRecord {
    fn from(rec: &SolutionRecord) -> Self {
        Self {
            r: rec.r,
            k: BigInt::from(rec.k),
            parity: rec.parity,
            bases: rec.bases.iter().cloned().map(BigInt::from).collect(),
            families: rec.families.clone(),
        }
    }
}

pub fn expand(factorization: &Factorization) -> Vec<BigInt> {
    factorization
        .factors()
        .iter()
        .flat_map(|f| std::iter::repeat_n(f.base.clone(), f.exponent as usize))
        .collect()
}

/// JSON value for an integer under the 2^53 − 1 rule.
pub fn int_value(v: &BigInt) -> serde_json::Value {
    match i64::try_from(v) {
        Ok(n) if n.abs() <= json_int::MAX_SAFE => serde_json::Value::from(n),
        _ => serde_json::Value::from(v.to_string()),
    }
}

pub mod json_int {
    use std::fmt;

    use num_bigint::BigInt;
    use serde::de::{self, Unexpected, Visitor};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub const MAX_SAFE: i64 = (1 << 53) - 1;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(v) {
            Ok(n) if n.abs() <= MAX_SAFE => s.serialize_i64(n),
            _ => s.collect_str(v),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        d.deserialize_any(IntVisitor)
    }

    struct IntVisitor;

    impl Visitor<'_> for IntVisitor {
        type Value = BigInt;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("an integer or a decimal string")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
            Ok(v.into())
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
            Ok(v.into())
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
            v.parse()
                .map_err(|_| E::invalid_value(Unexpected::Str(v), &self))
        }
    }

    struct Ref<'a>(&'a BigInt);

    impl Serialize for Ref<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            serialize(self.0, s)
        }
    }

    struct Owned(BigInt);

    impl<'de> Deserialize<'de> for Owned {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            deserialize(d).map(Owned)
        }
    }

    pub mod list {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(Ref))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            let items = Vec::<Owned>::deserialize(d)?;
            Ok(items.into_iter().map(|o| o.0).collect())
        }
    }
}

mod parity_name {
    use lehmer_core::Parity;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &Parity, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(p.as_str())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Parity, D::Error> {
        let name = String::deserialize(d)?;
        name.parse()
            .map_err(|_| de::Error::invalid_value(de::Unexpected::Str(&name), &"odd or even"))
    }
}

pub fn write_records<W: Write>(
    out: &mut W,
    format: Format,
    records: &[OutputRecord],
) -> io::Result<()> {
    match format {
        Format::Jsonl => write_jsonl(out, records),
        Format::Csv => write_csv(out, records),
        Format::Table => write_table(out, records),
    }
}

pub fn write_jsonl<W: Write>(out: &mut W, records: &[OutputRecord]) -> io::Result<()> {
    for rec in records {
        serde_json::to_writer(&mut *out, rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Parses one record per nonblank line and checks its invariants.
pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<OutputRecord>, RecordError> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let index = out.len() + 1;
        let rec: OutputRecord = serde_json::from_str(&line).map_err(|e| invalid(index, e))?;
        rec.check().map_err(|e| invalid(index, e))?;
        out.push(rec);
    }
    Ok(out)
}

const CSV_HEADER: [&str; 5] = ["r", "k", "parity", "bases", "families"];

#[derive(Serialize, Deserialize)]
struct CsvRow {
    r: usize,
    k: String,
    parity: String,
    bases: String,
    families: String,
}

pub fn write_csv<W: Write>(out: &mut W, records: &[OutputRecord]) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for rec in records {
        let bases: Vec<String> = rec.bases.iter().map(BigInt::to_string).collect();
        w.serialize(CsvRow {
            r: rec.r,
            k: rec.k.to_string(),
            parity: rec.parity.as_str().to_owned(),
            bases: bases.join(" "),
            families: rec.families.join(";"),
        })?;
    }
    w.flush()
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<OutputRecord>, RecordError> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers().map_err(|e| invalid(0, e))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(invalid(
            0,
            format!("expected header {}", CSV_HEADER.join(",")),
        ));
    }
    let mut out = Vec::new();
    for row in reader.deserialize::<CsvRow>() {
        let index = out.len() + 1;
        let row = row.map_err(|e| invalid(index, e))?;
        let k = row
            .k
            .parse()
            .map_err(|_| invalid(index, format!("bad k {:?}", row.k)))?;
        let bases = row
            .bases
            .split_whitespace()
            .map(|b| {
                b.parse()
                    .map_err(|_| invalid(index, format!("bad base {b:?}")))
            })
            .collect::<Result<Vec<BigInt>, _>>()?;
        let parity = row
            .parity
            .parse()
            .map_err(|_| invalid(index, format!("bad parity {:?}", row.parity)))?;
        let families = match row.families.as_str() {
            "" => Vec::new(),
            s => s.split(';').map(str::to_owned).collect(),
        };
        let rec = OutputRecord {
            r: row.r,
            k,
            parity,
            bases,
            families,
        };
        rec.check().map_err(|e| invalid(index, e))?;
        out.push(rec);
    }
    Ok(out)
}

/// Columns `r`, `k`, `factorization`, `families`.
pub fn write_table<W: Write>(out: &mut W, records: &[OutputRecord]) -> io::Result<()> {
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|rec| {
            let families = match rec.families.is_empty() {
                true => "sporadic".to_owned(),
                false => rec.families.join(", "),
            };
            vec![
                rec.r.to_string(),
                rec.k.to_string(),
                rec.factorization_text(),
                families,
            ]
        })
        .collect();
    write_aligned(out, &["r", "k", "factorization", "families"], &rows)
}

/// Left-aligned columns separated by two spaces; the last column is not
/// padded.
pub fn write_aligned<W: Write>(
    out: &mut W,
    header: &[&str],
    rows: &[Vec<String>],
) -> io::Result<()> {
    let header: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    let mut widths = vec![0usize; header.len()];
    for row in std::iter::once(&header).chain(rows) {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    for row in std::iter::once(&header).chain(rows) {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            line.push_str(cell);
            if i + 1 < row.len() {
                line.push_str(&" ".repeat(widths[i] - cell.chars().count() + 2));
            }
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}
