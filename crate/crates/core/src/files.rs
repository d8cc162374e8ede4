//! File formats: point-set and hyperplane-family files, Gram matrices, and
//! spectrum CSVs.
//!
//! Every set/family/Gram file starts with the header line
//! `pg <s> <q> <p> <e> <modulus c0,c1,...>`; a reader rejects any file whose
//! header does not match the space it is being read into. Set and family
//! files then carry one sorted index per line with the coordinates as a
//! trailing `#` comment.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::galois::FieldElement;
use crate::hermitian::HermitianForm;
use crate::projective::ProjectiveSpace;
use crate::sets::{HyperplaneFamily, PointSet, SpectrumReport};

/// The `pg s q p e modulus` header shared by all geometry files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileHeader {
    pub s: u64,
    pub q: u64,
    pub p: u64,
    pub e: u32,
    pub modulus: Vec<u64>,
}

impl FileHeader {
    pub fn for_space(space: &ProjectiveSpace) -> FileHeader {
        let field = space.field();
        FileHeader {
            s: space.s() as u64,
            q: field.q(),
            p: field.p(),
            e: field.subfield_degree(),
            modulus: field.modulus().to_vec(),
        }
    }

    pub fn to_line(&self) -> String {
        let modulus = self
            .modulus
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!("pg {} {} {} {} {}", self.s, self.q, self.p, self.e, modulus)
    }

    pub fn parse(line: &str) -> Result<FileHeader> {
        let malformed = |reason: &str| Error::Malformed {
            line: 1,
            reason: reason.to_string(),
        };
        let mut parts = line.split_whitespace();
        if parts.next() != Some("pg") {
            return Err(malformed("header must start with `pg`"));
        }
        let mut next_num = || -> Result<u64> {
            parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| malformed("header needs `pg s q p e modulus`"))
        };
        let s = next_num()?;
        let q = next_num()?;
        let p = next_num()?;
        let e = next_num()? as u32;
        let modulus = parts
            .next()
            .ok_or_else(|| malformed("missing modulus coefficients"))?
            .split(',')
            .map(|t| t.parse::<u64>().map_err(|_| malformed("bad modulus digit")))
            .collect::<Result<Vec<_>>>()?;
        if parts.next().is_some() {
            return Err(malformed("trailing tokens after modulus"));
        }
        Ok(FileHeader { s, q, p, e, modulus })
    }

    pub fn check(&self, space: &ProjectiveSpace) -> Result<()> {
        let expected = FileHeader::for_space(space);
        if *self == expected {
            Ok(())
        } else {
            Err(Error::HeaderMismatch {
                expected: expected.to_line(),
                found: self.to_line(),
            })
        }
    }
}

fn write_indexed<W: Write>(
    out: &mut W,
    space: &ProjectiveSpace,
    indices: impl Iterator<Item = usize>,
) -> Result<()> {
    writeln!(out, "{}", FileHeader::for_space(space).to_line())?;
    for idx in indices {
        let coords = space.point_from_index(idx);
        let rendered = coords
            .coords()
            .iter()
            .map(|c| c.encoding().to_string())
            .collect::<Vec<_>>()
            .join(",");
        writeln!(out, "{idx} # {rendered}")?;
    }
    Ok(())
}

fn read_indexed<R: BufRead>(input: R, space: &ProjectiveSpace) -> Result<Vec<usize>> {
    let mut lines = input.lines();
    let header_line = lines.next().ok_or(Error::Malformed {
        line: 1,
        reason: "empty file".to_string(),
    })??;
    FileHeader::parse(&header_line)?.check(space)?;
    let mut indices = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let idx: usize = body.parse().map_err(|_| Error::Malformed {
            line: lineno + 2,
            reason: format!("expected an index, found `{body}`"),
        })?;
        if idx >= space.point_count() {
            return Err(Error::Malformed {
                line: lineno + 2,
                reason: format!("index {idx} out of range (θ(s) = {})", space.point_count()),
            });
        }
        if let Some(&last) = indices.last() {
            if idx <= last {
                return Err(Error::Malformed {
                    line: lineno + 2,
                    reason: format!("indices must be strictly increasing (saw {last} then {idx})"),
                });
            }
        }
        indices.push(idx);
    }
    Ok(indices)
}

pub fn write_point_set<W: Write>(out: &mut W, space: &ProjectiveSpace, set: &PointSet) -> Result<()> {
    write_indexed(out, space, set.iter())
}

pub fn read_point_set<R: BufRead>(input: R, space: &ProjectiveSpace) -> Result<PointSet> {
    Ok(PointSet::from_indices(
        space.point_count(),
        read_indexed(input, space)?,
    ))
}

pub fn write_family<W: Write>(
    out: &mut W,
    space: &ProjectiveSpace,
    family: &HyperplaneFamily,
) -> Result<()> {
    write_indexed(out, space, family.iter())
}

pub fn read_family<R: BufRead>(input: R, space: &ProjectiveSpace) -> Result<HyperplaneFamily> {
    Ok(HyperplaneFamily::from_indices(
        space.point_count(),
        read_indexed(input, space)?,
    ))
}

/// Gram matrices: header line, then one row per line of comma-separated
/// integer encodings.
pub fn write_gram<W: Write>(
    out: &mut W,
    space: &ProjectiveSpace,
    form: &HermitianForm,
) -> Result<()> {
    writeln!(out, "{}", FileHeader::for_space(space).to_line())?;
    for row in form.gram() {
        let rendered = row
            .iter()
            .map(|c| c.encoding().to_string())
            .collect::<Vec<_>>()
            .join(",");
        writeln!(out, "{rendered}")?;
    }
    Ok(())
}

pub fn read_gram<R: BufRead>(input: R, space: &ProjectiveSpace) -> Result<HermitianForm> {
    let mut lines = input.lines();
    let header_line = lines.next().ok_or(Error::Malformed {
        line: 1,
        reason: "empty file".to_string(),
    })??;
    FileHeader::parse(&header_line)?.check(space)?;
    let field = space.field();
    let mut gram: Vec<Vec<FieldElement>> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .trim()
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Malformed {
                        line: lineno + 2,
                        reason: format!("bad encoding `{t}`"),
                    })
                    .and_then(|enc| field.element(enc))
            })
            .collect::<Result<Vec<_>>>()?;
        gram.push(row);
    }
    HermitianForm::from_gram(space, gram)
}

/// Spectrum CSV: a `size,count` header row then sorted rows.
pub fn write_spectrum_csv<W: Write>(out: &mut W, report: &SpectrumReport) -> Result<()> {
    writeln!(out, "size,count")?;
    for (size, count) in report.pairs() {
        writeln!(out, "{size},{count}")?;
    }
    Ok(())
}

pub fn read_spectrum_csv<R: BufRead>(input: R) -> Result<SpectrumReport> {
    let mut report = SpectrumReport::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || (lineno == 0 && trimmed == "size,count") {
            continue;
        }
        let mut parts = trimmed.split(',');
        let parse = |t: Option<&str>| -> Result<u64> {
            t.and_then(|v| v.trim().parse().ok()).ok_or(Error::Malformed {
                line: lineno + 1,
                reason: format!("expected `size,count`, found `{trimmed}`"),
            })
        };
        let size = parse(parts.next())?;
        let count = parse(parts.next())?;
        report.record_many(size, count);
    }
    Ok(report)
}
