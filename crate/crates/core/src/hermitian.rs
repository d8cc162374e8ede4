//! Hermitian forms and varieties: polarity, tangency classification, cones,
//! intersection spectra, and the closed-form counts they must reproduce.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::galois::FieldElement;
use crate::projective::{Hyperplane, ProjectivePoint, ProjectiveSpace};
use crate::sets::{DenseBitSet, HyperplaneFamily, PointSet, SpectrumReport};

/// A non-singular conjugate-symmetric form on PG(s, q²), by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianForm {
    gram: Vec<Vec<FieldElement>>,
}

/// How a hyperplane meets the variety: in a point-vertex cone (tangent,
/// m₂ points) or in a non-singular section (non-tangent, m₁ points).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tangency {
    Tangent,
    NonTangent,
}

impl HermitianForm {
    /// The standard form with identity Gram: Σ xᵢ^{q+1} = 0.
    pub fn standard(space: &ProjectiveSpace) -> HermitianForm {
        let n = space.n_coords();
        let mut gram = vec![vec![FieldElement::ZERO; n]; n];
        for (i, row) in gram.iter_mut().enumerate() {
            row[i] = FieldElement::ONE;
        }
        HermitianForm { gram }
    }

    /// Validates conjugate symmetry and non-singularity of an arbitrary Gram.
    pub fn from_gram(space: &ProjectiveSpace, gram: Vec<Vec<FieldElement>>) -> Result<HermitianForm> {
        let n = space.n_coords();
        if gram.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: gram.len(),
            });
        }
        let field = space.field();
        for i in 0..n {
            for j in 0..n {
                if gram[j][i] != field.conj(gram[i][j]) {
                    return Err(Error::NotConjugateSymmetric { row: i, col: j });
                }
            }
        }
        let form = HermitianForm { gram };
        form.gram_inverse(space)?; // singularity check
        Ok(form)
    }

    pub fn gram(&self) -> &[Vec<FieldElement>] {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    /// Gauss–Jordan inverse of the Gram matrix.
    pub fn gram_inverse(&self, space: &ProjectiveSpace) -> Result<Vec<Vec<FieldElement>>> {
        let field = space.field();
        let n = self.gram.len();
        let mut a = self.gram.clone();
        let mut inv = vec![vec![FieldElement::ZERO; n]; n];
        for (i, row) in inv.iter_mut().enumerate() {
            row[i] = FieldElement::ONE;
        }
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::SingularGram)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let scale = field.inv(a[col][col])?;
            for j in 0..n {
                a[col][j] = field.mul(scale, a[col][j]);
                inv[col][j] = field.mul(scale, inv[col][j]);
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col];
                for j in 0..n {
                    a[r][j] = field.sub(a[r][j], field.mul(factor, a[col][j]));
                    inv[r][j] = field.sub(inv[r][j], field.mul(factor, inv[col][j]));
                }
            }
        }
        Ok(inv)
    }
}

/// conj(x)ᵀ·G·x. Values lie in GF(q); zero iff x is on the variety, and the
/// zero locus is projectively well defined (scaling multiplies by a norm).
pub fn evaluate(
    space: &ProjectiveSpace,
    form: &HermitianForm,
    coords: &[FieldElement],
) -> Result<FieldElement> {
    if coords.len() != space.n_coords() || form.dim() != space.n_coords() {
        return Err(Error::DimensionMismatch {
            expected: space.n_coords(),
            got: coords.len(),
        });
    }
    Ok(evaluate_unchecked(space, form, coords))
}

fn evaluate_unchecked(
    space: &ProjectiveSpace,
    form: &HermitianForm,
    coords: &[FieldElement],
) -> FieldElement {
    let field = space.field();
    let mut acc = FieldElement::ZERO;
    for (i, row) in form.gram.iter().enumerate() {
        if coords[i].is_zero() {
            continue;
        }
        let mut rowsum = FieldElement::ZERO;
        for (j, &g) in row.iter().enumerate() {
            rowsum = field.add(rowsum, field.mul(g, coords[j]));
        }
        acc = field.add(acc, field.mul(field.conj(coords[i]), rowsum));
    }
    debug_assert!(field.in_subfield(acc));
    acc
}

/// All points where the form vanishes.
pub fn variety_points(space: &ProjectiveSpace, form: &HermitianForm) -> Result<PointSet> {
    if form.dim() != space.n_coords() {
        return Err(Error::DimensionMismatch {
            expected: space.n_coords(),
            got: form.dim(),
        });
    }
    let mut set = PointSet::new(space.point_count());
    for (idx, point) in space.points().enumerate() {
        if evaluate_unchecked(space, form, point.coords()).is_zero() {
            set.insert(idx);
        }
    }
    Ok(set)
}

/// The polar hyperplane of y: dual coordinates conj(G·y). When y is on the
/// variety this is the tangent hyperplane at y, and it contains y.
pub fn polar(
    space: &ProjectiveSpace,
    form: &HermitianForm,
    y: &ProjectivePoint,
) -> Result<Hyperplane> {
    let field = space.field();
    let image = mat_vec(space, &form.gram, y.coords());
    let dual: Vec<FieldElement> = image.iter().map(|&c| field.conj(c)).collect();
    space.hyperplane(&dual)
}

/// The unique point whose polar hyperplane is H: normalize(G⁻¹·conj(dual)).
pub fn pole(
    space: &ProjectiveSpace,
    form: &HermitianForm,
    h: &Hyperplane,
) -> Result<ProjectivePoint> {
    let inv = form.gram_inverse(space)?;
    pole_with_inverse(space, &inv, h)
}

fn pole_with_inverse(
    space: &ProjectiveSpace,
    gram_inv: &[Vec<FieldElement>],
    h: &Hyperplane,
) -> Result<ProjectivePoint> {
    let field = space.field();
    let conj_dual: Vec<FieldElement> = h.dual_coords().iter().map(|&c| field.conj(c)).collect();
    space.point(&mat_vec(space, gram_inv, &conj_dual))
}

fn mat_vec(
    space: &ProjectiveSpace,
    m: &[Vec<FieldElement>],
    v: &[FieldElement],
) -> Vec<FieldElement> {
    let field = space.field();
    m.iter().map(|row| space_dot(field, row, v)).collect()
}

fn space_dot(
    field: &crate::galois::Field,
    a: &[FieldElement],
    b: &[FieldElement],
) -> FieldElement {
    let mut acc = FieldElement::ZERO;
    for (&x, &y) in a.iter().zip(b) {
        acc = field.add(acc, field.mul(x, y));
    }
    acc
}

/// Tangent iff the pole lies on the variety (for the identity Gram this is
/// Σ N(dualᵢ) = 0).
pub fn classify_hyperplane(
    space: &ProjectiveSpace,
    form: &HermitianForm,
    h: &Hyperplane,
) -> Result<Tangency> {
    let y = pole(space, form, h)?;
    Ok(if evaluate_unchecked(space, form, y.coords()).is_zero() {
        Tangency::Tangent
    } else {
        Tangency::NonTangent
    })
}

/// Ω: the family of all non-tangent hyperplanes of the form.
pub fn nontangent_family(
    space: &ProjectiveSpace,
    form: &HermitianForm,
) -> Result<HyperplaneFamily> {
    let inv = form.gram_inverse(space)?;
    let mut family = HyperplaneFamily::new(space.point_count());
    for idx in 0..space.point_count() {
        let h = space.hyperplane_from_index(idx);
        let y = pole_with_inverse(space, &inv, &h)?;
        if !evaluate_unchecked(space, form, y.coords()).is_zero() {
            family.insert(idx);
        }
    }
    Ok(family)
}

/// The cone over `base` with vertex set `vertex`: the union of all lines
/// joining a vertex point to a base point, together with both sets.
pub fn cone(space: &ProjectiveSpace, vertex: &PointSet, base: &PointSet) -> Result<PointSet> {
    if vertex.bits().intersection_len(base.bits()) > 0 {
        return Err(Error::VertexMeetsBase);
    }
    let field = space.field();
    let n = space.n_coords();
    let mut out = PointSet::new(space.point_count());
    for v in vertex.iter() {
        out.insert(v);
    }
    for b in base.iter() {
        out.insert(b);
    }
    let mut combo = vec![FieldElement::ZERO; n];
    for v_idx in vertex.iter() {
        let v = space.point_from_index(v_idx);
        for b_idx in base.iter() {
            let b = space.point_from_index(b_idx);
            for lambda in field.elements().skip(1) {
                for j in 0..n {
                    combo[j] = field.add(v.coords()[j], field.mul(lambda, b.coords()[j]));
                }
                out.insert(space.index_of_coords(&space.normalize(&combo)?));
            }
        }
    }
    Ok(out)
}

/// Dense point-hyperplane incidence, one bitset row per index.
///
/// Because points and hyperplanes share the same canonical enumeration and
/// incidence is the symmetric dot product, row i serves simultaneously as
/// "points on hyperplane i" and "hyperplanes through point i".
#[derive(Debug, Clone)]
pub struct IncidenceCache {
    universe: usize,
    words_per_row: usize,
    rows: Vec<u64>,
}

impl IncidenceCache {
    pub fn build(space: &ProjectiveSpace) -> IncidenceCache {
        let n = space.point_count();
        let words = n.div_ceil(64);
        let mut rows = vec![0u64; n * words];
        rows.par_chunks_mut(words).enumerate().for_each(|(a, row)| {
            let h = space.hyperplane_from_index(a);
            space.for_each_point_on_hyperplane(&h, |i| {
                row[i / 64] |= 1 << (i % 64);
            });
        });
        IncidenceCache {
            universe: n,
            words_per_row: words,
            rows,
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Raw bitset row: points on hyperplane i / hyperplanes through point i.
    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn incident(&self, point: usize, hyperplane: usize) -> bool {
        self.row(hyperplane)[point / 64] >> (point % 64) & 1 == 1
    }

    /// |row(i) ∩ set|.
    pub fn intersection_len(&self, i: usize, set: &DenseBitSet) -> u64 {
        set.intersection_len_words(self.row(i)) as u64
    }

    pub fn row_bitset(&self, i: usize) -> DenseBitSet {
        DenseBitSet::from_indices(
            self.universe,
            self.row(i).iter().enumerate().flat_map(|(wi, &w)| {
                (0..64)
                    .filter(move |b| w >> b & 1 == 1)
                    .map(move |b| wi * 64 + b)
            }),
        )
    }
}

/// What to intersect a point set against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Against {
    Hyperplanes,
    Codim2,
}

/// |target ∩ H| for every hyperplane H, indexed by hyperplane.
pub fn hyperplane_counts(
    space: &ProjectiveSpace,
    cache: &IncidenceCache,
    target: &PointSet,
) -> Result<Vec<u64>> {
    check_universe(space, target.universe())?;
    Ok((0..space.point_count())
        .into_par_iter()
        .map(|a| cache.intersection_len(a, target.bits()))
        .collect())
}

/// Exact multiset of |target ∩ W| over all subspaces W of the chosen kind.
pub fn spectrum(
    space: &ProjectiveSpace,
    cache: &IncidenceCache,
    target: &PointSet,
    against: Against,
) -> Result<SpectrumReport> {
    match against {
        Against::Hyperplanes => hyperplane_spectrum(space, cache, target),
        Against::Codim2 => codim2_spectrum(space, cache, target),
    }
}

pub fn hyperplane_spectrum(
    space: &ProjectiveSpace,
    cache: &IncidenceCache,
    target: &PointSet,
) -> Result<SpectrumReport> {
    let counts = hyperplane_counts(space, cache, target)?;
    let mut report = SpectrumReport::new();
    for c in counts {
        report.record(c);
    }
    Ok(report)
}

/// Codimension-2 intersection sizes without enumerating subspace points:
/// the pencil through W partitions the complement of W, so
/// |W ∩ T| = (Σ_{H ∈ pencil} |H ∩ T| − |T|) / q².
pub fn codim2_spectrum(
    space: &ProjectiveSpace,
    cache: &IncidenceCache,
    target: &PointSet,
) -> Result<SpectrumReport> {
    let counts = hyperplane_counts(space, cache, target)?;
    let total = target.len() as u64;
    let order = space.field().order();
    let mut report = SpectrumReport::new();
    space.for_each_pencil(|_, _, pencil| {
        let sum: u64 = pencil.iter().map(|&h| counts[h]).sum();
        debug_assert_eq!((sum - total) % order, 0);
        report.record((sum - total) / order);
    })?;
    Ok(report)
}

fn check_universe(space: &ProjectiveSpace, got: usize) -> Result<()> {
    if got == space.point_count() {
        Ok(())
    } else {
        Err(Error::UniverseMismatch {
            expected: space.point_count(),
            got,
        })
    }
}

pub(crate) fn exact_div(num: i128, den: i128) -> Result<i128> {
    if den != 0 && num % den == 0 {
        Ok(num / den)
    } else {
        Err(Error::NonIntegralDivision { num, den })
    }
}

fn sign(dim: i64) -> i128 {
    if dim.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn q_pow(q: u64, exp: i64) -> i128 {
    debug_assert!(exp >= 0);
    (q as i128).pow(exp as u32)
}

/// |H(dim, q²)| = (q^{dim+1} + (−1)^dim)(q^dim − (−1)^dim)/(q² − 1), with
/// the conventions |H(0)| = |H(−1)| = 0 so the expressions below are total.
pub fn hermitian_size(dim: i64, q: u64) -> Result<u64> {
    if dim <= 0 {
        return Ok(0);
    }
    let num = (q_pow(q, dim + 1) + sign(dim)) * (q_pow(q, dim) - sign(dim));
    let den = q_pow(q, 2) - 1;
    Ok(exact_div(num, den)? as u64)
}

/// |pH(dim, q²)| = 1 + q²·|H(dim, q²)|: a cone with point vertex.
pub fn cone_point_size(dim: i64, q: u64) -> Result<u64> {
    Ok(1 + q * q * hermitian_size(dim, q)?)
}

/// |LH(dim, q²)| = (q²+1) + q⁴·|H(dim, q²)|: a cone with line vertex.
pub fn cone_line_size(dim: i64, q: u64) -> Result<u64> {
    Ok(q * q + 1 + q * q * q * q * hermitian_size(dim, q)?)
}

/// Every closed-form count the verification pipeline compares against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedCounts {
    pub s: u64,
    pub q: u64,
    /// θ(s) = (q^{2s+2}−1)/(q²−1): points of PG(s, q²).
    #[serde(rename = "theta")]
    pub theta_s: u64,
    /// |H(s, q²)|.
    pub h_size: u64,
    /// Non-tangent hyperplane section size |H(s−1, q²)|.
    pub m1: u64,
    /// Tangent hyperplane section size 1 + q²|H(s−2, q²)|.
    pub m2: u64,
    /// Codimension-2 section sizes.
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
    /// Number of tangent hyperplanes, |H(s, q²)|.
    #[serde(rename = "tangent")]
    pub tangent_count: u64,
    /// |Ω| = q^s(q^{s+1}+(−1)^s)/(q+1) non-tangent hyperplanes.
    #[serde(rename = "omega")]
    pub nontangent_count: u64,
    /// h: Ω-degree of an on-variety (black) point.
    pub black_degree: u64,
    /// m: Ω-degree of an off-variety (white) point.
    pub white_degree: u64,
}

impl ExpectedCounts {
    pub fn new(s: u64, q: u64) -> Result<ExpectedCounts> {
        assert!(s >= 1 && q >= 2);
        let sd = s as i64;
        let theta_s = exact_div(q_pow(q, 2 * sd + 2) - 1, q_pow(q, 2) - 1)? as u64;
        let h_size = hermitian_size(sd, q)?;
        let nontangent_count =
            exact_div(q_pow(q, sd) * (q_pow(q, sd + 1) + sign(sd)), q as i128 + 1)? as u64;
        let black_degree =
            exact_div(q_pow(q, sd) * (q_pow(q, sd - 1) - sign(sd - 1)), q as i128 + 1)? as u64;
        let white_degree =
            exact_div(q_pow(q, sd - 1) * (q_pow(q, sd) - sign(sd)), q as i128 + 1)? as u64;
        let counts = ExpectedCounts {
            s,
            q,
            theta_s,
            h_size,
            m1: hermitian_size(sd - 1, q)?,
            m2: cone_point_size(sd - 2, q)?,
            n1: hermitian_size(sd - 2, q)?,
            n2: cone_point_size(sd - 3, q)?,
            n3: cone_line_size(sd - 4, q)?,
            tangent_count: h_size,
            nontangent_count,
            black_degree,
            white_degree,
        };
        debug_assert_eq!(counts.tangent_count + counts.nontangent_count, theta_s);
        Ok(counts)
    }
}
