//! Verification of hyperplane-family characterizations: point classification
//! (Property I), codimension-2 containment bounds (Property II), the
//! black-point lemma suite, exact double-counting identities, and the final
//! intersection-number certification.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermitian::{
    exact_div, hyperplane_counts, hyperplane_spectrum, variety_points, ExpectedCounts,
    HermitianForm, IncidenceCache,
};
use crate::projective::{CodimTwoSubspace, ProjectiveSpace};
use crate::sets::{HyperplaneFamily, PointSet, SpectrumReport};

/// Scan policy for codimension-2 checks: exhaustive canonical stream, or a
/// seeded uniform sample for quick runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Codim2Mode {
    Full,
    Sample { n: u64, seed: u64 },
}

/// Per-point membership degrees split into black (degree h), white
/// (degree m), and violators (any other degree).
#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub black: PointSet,
    pub white: PointSet,
    /// (point index, observed degree) for every point off both degrees.
    pub violators: Vec<(usize, u64)>,
    /// Observed degree of every point, by point index.
    pub degrees: Vec<u64>,
    pub black_degree: u64,
    pub white_degree: u64,
}

impl ClassificationReport {
    pub fn passes(&self) -> bool {
        self.violators.is_empty()
    }
}

/// Counts, for every point, the members of F through it, and buckets the
/// point by the two Property I degrees.
pub fn classify_points(
    space: &ProjectiveSpace,
    cache: &IncidenceCache,
    family: &HyperplaneFamily,
    counts: &ExpectedCounts,
) -> Result<ClassificationReport> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if family.universe() != space.point_count() {
        return Err(Error::UniverseMismatch {
            expected: space.point_count(),
            got: family.universe(),
        });
    }
    use rayon::prelude::*;
    let degrees: Vec<u64> = (0..space.point_count())
        .into_par_iter()
        .map(|x| cache.intersection_len(x, family.bits()))
        .collect();
    let mut black = PointSet::new(space.point_count());
    let mut white = PointSet::new(space.point_count());
    let mut violators = Vec::new();
    for (x, &d) in degrees.iter().enumerate() {
        if d == counts.black_degree {
            black.insert(x);
        } else if d == counts.white_degree {
            white.insert(x);
        } else {
            violators.push((x, d));
        }
    }
    Ok(ClassificationReport {
        black,
        white,
        violators,
        degrees,
        black_degree: counts.black_degree,
        white_degree: counts.white_degree,
    })
}

/// A codimension-2 subspace that broke a bound, pinned by canonical rank and
/// its RREF dual rows.
#[derive(Debug, Clone, Serialize)]
pub struct Codim2Witness {
    pub rank: u128,
    pub rows: Vec<Vec<u64>>,
    pub value: u64,
}

fn witness_of(rank: u128, w: &CodimTwoSubspace, value: u64) -> Codim2Witness {
    let (r0, r1) = w.rows();
    Codim2Witness {
        rank,
        rows: vec![
            r0.iter().map(|c| c.encoding()).collect(),
            r1.iter().map(|c| c.encoding()).collect(),
        ],
        value,
    }
}

/// Property II verdict: every codimension-2 subspace lying in at least one
/// member of F must lie in between q²−q and q² members.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyTwoReport {
    pub pass: bool,
    pub spectrum: SpectrumReport,
    pub witness: Option<Codim2Witness>,
    pub scanned: u128,
    pub mode: Codim2Mode,
}

pub fn check_property_ii(
    space: &ProjectiveSpace,
    family: &HyperplaneFamily,
    mode: Codim2Mode,
) -> Result<PropertyTwoReport> {
    let q = space.field().q();
    let lo = q * q - q;
    let hi = q * q;
    let mut spectrum = SpectrumReport::new();
    let mut witness = None;
    let mut visit = |rank: u128, w: &CodimTwoSubspace, pencil: &[usize]| {
        let k = pencil.iter().filter(|&&h| family.contains(h)).count() as u64;
        spectrum.record(k);
        if witness.is_none() && k > 0 && !(lo..=hi).contains(&k) {
            witness = Some(witness_of(rank, w, k));
        }
    };
    let scanned = match mode {
        Codim2Mode::Full => space.for_each_pencil(&mut visit)?,
        Codim2Mode::Sample { n, seed } => space.sample_pencils(n, seed, &mut visit)? as u128,
    };
    Ok(PropertyTwoReport {
        pass: witness.is_none(),
        spectrum,
        witness,
        scanned,
        mode,
    })
}

/// One lemma verdict over hyperplanes: an expected exact black count, with
/// the first offending hyperplane on failure.
#[derive(Debug, Clone, Serialize)]
pub struct HyperplaneLemma {
    pub pass: bool,
    pub expected: u64,
    pub witness: Option<(usize, u64)>,
}

/// The codimension-2 lemma verdict: black counts confined to {n₁, n₂, n₃}.
#[derive(Debug, Clone, Serialize)]
pub struct Codim2Lemma {
    pub pass: bool,
    pub allowed: Vec<u64>,
    pub spectrum: SpectrumReport,
    pub witness: Option<Codim2Witness>,
    pub scanned: u128,
}

/// Verdicts for the black-point lemma chain.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaSuiteReport {
    /// |black| = |H(s, q²)|.
    pub black_total: HyperplaneLemma,
    /// Every member of F contains exactly m₁ black points.
    pub members: HyperplaneLemma,
    /// Every hyperplane outside F contains exactly m₂ = |pH(s−2)| black points.
    pub non_members: HyperplaneLemma,
    /// Every codimension-2 subspace has n₁, n₂ or n₃ black points.
    pub codim2: Codim2Lemma,
}

impl LemmaSuiteReport {
    pub fn passes(&self) -> bool {
        self.black_total.pass && self.members.pass && self.non_members.pass && self.codim2.pass
    }
}

pub fn lemma_suite(
    space: &ProjectiveSpace,
    cache: &IncidenceCache,
    family: &HyperplaneFamily,
    classification: &ClassificationReport,
    counts: &ExpectedCounts,
    mode: Codim2Mode,
) -> Result<LemmaSuiteReport> {
    let black = &classification.black;
    let black_total = HyperplaneLemma {
        pass: black.len() as u64 == counts.h_size,
        expected: counts.h_size,
        witness: if black.len() as u64 == counts.h_size {
            None
        } else {
            Some((0, black.len() as u64))
        },
    };

    let per_hyperplane = hyperplane_counts(space, cache, black)?;
    let check_constant = |want: u64, in_family: bool| -> HyperplaneLemma {
        let witness = per_hyperplane
            .iter()
            .enumerate()
            .find(|&(idx, &c)| family.contains(idx) == in_family && c != want)
            .map(|(idx, &c)| (idx, c));
        HyperplaneLemma {
            pass: witness.is_none(),
            expected: want,
            witness,
        }
    };
    let members = check_constant(counts.m1, true);
    let non_members = check_constant(counts.m2, false);

    let allowed = vec![counts.n1, counts.n2, counts.n3];
    let order = space.field().order();
    let black_len = black.len() as u64;
    let mut spectrum = SpectrumReport::new();
    let mut witness = None;
    let mut visit = |rank: u128, w: &CodimTwoSubspace, pencil: &[usize]| {
        let sum: u64 = pencil.iter().map(|&h| per_hyperplane[h]).sum();
        debug_assert_eq!((sum - black_len) % order, 0);
        let b_w = (sum - black_len) / order;
        spectrum.record(b_w);
        if witness.is_none() && !allowed.contains(&b_w) {
            witness = Some(witness_of(rank, w, b_w));
        }
    };
    let scanned = match mode {
        Codim2Mode::Full => space.for_each_pencil(&mut visit)?,
        Codim2Mode::Sample { n, seed } => space.sample_pencils(n, seed, &mut visit)? as u128,
    };
    let codim2 = Codim2Lemma {
        pass: witness.is_none(),
        allowed,
        spectrum,
        witness,
        scanned,
    };

    Ok(LemmaSuiteReport {
        black_total,
        members,
        non_members,
        codim2,
    })
}

/// Measured quantities the double-counting identities are checked against.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProofStats {
    /// Number of black points.
    pub b: u64,
    /// Number of white points.
    pub w: u64,
    /// |Ω|: size of the family.
    pub omega: u64,
}

impl ProofStats {
    pub fn from_classification(
        classification: &ClassificationReport,
        family: &HyperplaneFamily,
    ) -> ProofStats {
        ProofStats {
            b: classification.black.len() as u64,
            w: classification.white.len() as u64,
            omega: family.len() as u64,
        }
    }
}

/// Exact integer verdicts for the incidence double counts, the divisibility
/// q^{s−1} | |Ω|, and the recovered slack t.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    /// b + w = θ(s).
    pub eq1: bool,
    /// b·h + w·m = |Ω|·θ(s−1).
    pub eq2: bool,
    /// (−1)^s q^{s−1} b + q^{s−1} θ(s) (q^s−(−1)^s)/(q+1) = |Ω|·θ(s−1).
    pub eq3: bool,
    pub omega_divisible: bool,
    /// |Ω₁| = |Ω| / q^{s−1}, when divisible.
    pub omega1: Option<u64>,
    /// Recovered slack with 1 ≤ t ≤ q²; equals q²−q for odd s, q for even s.
    pub t: Option<i64>,
    pub t_expected: u64,
    pub t_in_range: bool,
    pub t_matches: bool,
    /// k_s = (q^s−1)/(q−1).
    pub k_s: u64,
    pub pass: bool,
}

pub fn proof_identities(s: u64, q: u64, stats: ProofStats) -> Result<IdentityReport> {
    let sd = s as i64;
    let qi = q as i128;
    let qp = |e: i64| -> i128 { qi.pow(e as u32) };
    let sign = |d: i64| -> i128 {
        if d.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    };
    let b = stats.b as i128;
    let w = stats.w as i128;
    let omega = stats.omega as i128;

    let theta_s = exact_div(qp(2 * sd + 2) - 1, qi * qi - 1)?;
    let theta_s1 = exact_div(qp(2 * sd) - 1, qi * qi - 1)?;
    let h = exact_div(qp(sd) * (qp(sd - 1) - sign(sd - 1)), qi + 1)?;
    let m = exact_div(qp(sd - 1) * (qp(sd) - sign(sd)), qi + 1)?;

    let eq1 = b + w == theta_s;
    let eq2 = b * h + w * m == omega * theta_s1;
    let eq3 = sign(sd) * qp(sd - 1) * b + qp(sd - 1) * theta_s * exact_div(qp(sd) - sign(sd), qi + 1)?
        == omega * theta_s1;

    let q_pow_s1 = qp(sd - 1);
    let omega_divisible = omega % q_pow_s1 == 0;
    let omega1 = omega_divisible.then(|| (omega / q_pow_s1) as u64);
    let t = if omega_divisible {
        let base = if sd % 2 == 0 {
            exact_div(qp(sd + 2) - 1, qi + 1)? - (qi - 1)
        } else {
            exact_div(qp(sd + 2) + 1, qi + 1)? - (qi * qi - qi + 1)
        };
        Some((omega / q_pow_s1 - base) as i64)
    } else {
        None
    };
    let t_expected = if sd % 2 == 0 { q } else { q * q - q };
    let t_in_range = t.is_some_and(|t| t >= 1 && t <= (q * q) as i64);
    let t_matches = t == Some(t_expected as i64);
    let k_s = exact_div(qp(sd) - 1, qi - 1)? as u64;

    Ok(IdentityReport {
        eq1,
        eq2,
        eq3,
        omega_divisible,
        omega1,
        t,
        t_expected,
        t_in_range,
        t_matches,
        k_s,
        pass: eq1 && eq2 && eq3 && omega_divisible && t_in_range && t_matches,
    })
}

/// Serializable parameters block of a certificate.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateParams {
    pub s: u64,
    pub q: u64,
    pub p: u64,
    pub e: u32,
    pub modulus: Vec<u64>,
    pub family_size: u64,
    pub codim2_mode: Codim2Mode,
}

/// Property I section of a certificate.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyOneSection {
    pub pass: bool,
    pub black: u64,
    pub white: u64,
    pub violators: Vec<(usize, u64)>,
    pub black_degree: u64,
    pub white_degree: u64,
}

/// The complete verification verdict for one hyperplane family.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub params: CertificateParams,
    #[serde(rename = "property_I")]
    pub property_i: PropertyOneSection,
    #[serde(rename = "property_II")]
    pub property_ii: PropertyTwoReport,
    pub lemmas: LemmaSuiteReport,
    pub proof_identities: IdentityReport,
    /// Spectrum of |black ∩ H| over all hyperplanes H.
    pub black_hyperplane_spectrum: SpectrumReport,
    /// Spectrum of |black ∩ W| over all codimension-2 W.
    pub black_codim2_spectrum: SpectrumReport,
    /// Whether the black set equals the reference variety point-for-point;
    /// absent when no reference form was supplied.
    pub black_matches_reference: Option<bool>,
    /// Set when the parameters fall outside the characterization hypotheses.
    pub hypothesis_warning: Option<String>,
    /// True iff the black set has the hyperplane and codimension-2
    /// intersection numbers of H(s, q²) and the right size.
    pub conclusion: bool,
}

/// Runs the whole pipeline: classification, Property II, the lemma suite,
/// the exact identities, and the intersection-number conclusion.
pub fn certify(
    space: &ProjectiveSpace,
    cache: &IncidenceCache,
    family: &HyperplaneFamily,
    mode: Codim2Mode,
    reference: Option<&HermitianForm>,
) -> Result<Certificate> {
    if space.s() < 3 {
        return Err(Error::DimensionTooSmall {
            min: 3,
            got: space.s(),
        });
    }
    let q = space.field().q();
    let counts = ExpectedCounts::new(space.s() as u64, q)?;
    let classification = classify_points(space, cache, family, &counts)?;
    let property_ii = check_property_ii(space, family, mode)?;
    let lemmas = lemma_suite(space, cache, family, &classification, &counts, mode)?;
    let stats = ProofStats::from_classification(&classification, family);
    let identities = proof_identities(space.s() as u64, q, stats)?;

    let black_hyperplane_spectrum = hyperplane_spectrum(space, cache, &classification.black)?;
    let black_codim2_spectrum = lemmas.codim2.spectrum.clone();

    let conclusion = black_hyperplane_spectrum.support_within(&[counts.m1, counts.m2])
        && black_codim2_spectrum.support_within(&[counts.n1, counts.n2, counts.n3])
        && classification.black.len() as u64 == counts.h_size;

    let black_matches_reference = match reference {
        Some(form) => Some(variety_points(space, form)? == classification.black),
        None => None,
    };

    let field = space.field();
    Ok(Certificate {
        params: CertificateParams {
            s: space.s() as u64,
            q,
            p: field.p(),
            e: field.subfield_degree(),
            modulus: field.modulus().to_vec(),
            family_size: family.len() as u64,
            codim2_mode: mode,
        },
        property_i: PropertyOneSection {
            pass: classification.passes(),
            black: classification.black.len() as u64,
            white: classification.white.len() as u64,
            violators: classification.violators.clone(),
            black_degree: counts.black_degree,
            white_degree: counts.white_degree,
        },
        property_ii,
        lemmas,
        proof_identities: identities,
        black_hyperplane_spectrum,
        black_codim2_spectrum,
        black_matches_reference,
        hypothesis_warning: (q <= 2).then(|| {
            "q <= 2 lies outside the characterization hypotheses (q > 2 required)".to_string()
        }),
        conclusion,
    })
}

/// Convenience for tests and the CLI: cone size |pH(s−2, q²)|, the expected
/// black count of a hyperplane outside the family.
pub fn expected_out_of_family_count(counts: &ExpectedCounts) -> u64 {
    counts.m2
}
