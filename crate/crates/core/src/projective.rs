//! Points, hyperplanes, and codimension-2 subspaces of PG(s, q²):
//! canonical normalization, stable indexing, incidence, and streaming
//! enumeration.
//!
//! Points and hyperplanes share one canonical form (leftmost nonzero
//! coordinate = 1) and one index scheme: the rank of the normalized tuple in
//! lexicographic order. Codimension-2 subspaces are identified by the
//! reduced row-echelon form of their two-dimensional dual space, enumerated
//! in a fixed canonical order that supports both sequential streaming and
//! random access by rank.

use crate::error::{Error, Result};
use crate::galois::{Field, FieldElement};

/// Ceilings that make runaway enumerations fail fast.
#[derive(Debug, Clone, Copy)]
pub struct EnumerationLimits {
    pub max_points: u64,
    pub max_codim2: u64,
}

impl Default for EnumerationLimits {
    fn default() -> EnumerationLimits {
        EnumerationLimits {
            max_points: 1_000_000,
            max_codim2: 100_000_000,
        }
    }
}

/// A point of PG(s, q²), normalized so its leftmost nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<FieldElement>,
}

impl ProjectivePoint {
    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }
}

/// A hyperplane of PG(s, q²), by normalized dual coordinates:
/// x lies on the hyperplane iff Σ dualᵢ·xᵢ = 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    dual: Vec<FieldElement>,
}

impl Hyperplane {
    pub fn dual_coords(&self) -> &[FieldElement] {
        &self.dual
    }
}

/// A codimension-2 subspace, as the canonical RREF basis of its dual
/// 2-space: two rows with strictly increasing pivot columns, pivot entries 1
/// and zeros above pivots. The subspace is the common zero set of both rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodimTwoSubspace {
    rows: [Vec<FieldElement>; 2],
}

impl CodimTwoSubspace {
    pub fn rows(&self) -> (&[FieldElement], &[FieldElement]) {
        (&self.rows[0], &self.rows[1])
    }

    /// Pivot columns of the two RREF rows.
    pub fn pivots(&self) -> (usize, usize) {
        let lead = |row: &[FieldElement]| row.iter().position(|c| !c.is_zero()).unwrap();
        (lead(&self.rows[0]), lead(&self.rows[1]))
    }
}

/// PG(s, q²) over a concrete GF(q²).
#[derive(Debug, Clone)]
pub struct ProjectiveSpace {
    field: Field,
    s: usize,
    /// θ(k−1) = (Q^k−1)/(Q−1) for k in 0..=s+1; theta[s+1] is the point count.
    theta: Vec<u64>,
    /// Q^0..Q^{s+1}.
    q_pows: Vec<u64>,
    limits: EnumerationLimits,
}

impl ProjectiveSpace {
    pub fn new(field: Field, s: usize) -> Result<ProjectiveSpace> {
        ProjectiveSpace::with_limits(field, s, EnumerationLimits::default())
    }

    pub fn with_limits(
        field: Field,
        s: usize,
        limits: EnumerationLimits,
    ) -> Result<ProjectiveSpace> {
        if s < 1 {
            return Err(Error::DimensionTooSmall { min: 1, got: s });
        }
        let order = field.order();
        let mut theta = vec![0u64];
        let mut q_pows = vec![1u64];
        for _ in 0..=s {
            let t = theta
                .last()
                .unwrap()
                .checked_mul(order)
                .and_then(|v| v.checked_add(1))
                .ok_or(Error::CountOverflow)?;
            theta.push(t);
            let p = q_pows
                .last()
                .unwrap()
                .checked_mul(order)
                .ok_or(Error::CountOverflow)?;
            q_pows.push(p);
        }
        let count = theta[s + 1];
        if count > limits.max_points {
            return Err(Error::EnumerationBound {
                what: "points",
                count: count as u128,
                limit: limits.max_points as u128,
            });
        }
        Ok(ProjectiveSpace {
            field,
            s,
            theta,
            q_pows,
            limits,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Number of coordinates, s + 1.
    pub fn n_coords(&self) -> usize {
        self.s + 1
    }

    pub fn limits(&self) -> EnumerationLimits {
        self.limits
    }

    /// θ(s): number of points (and of hyperplanes).
    pub fn point_count(&self) -> usize {
        self.theta[self.s + 1] as usize
    }

    /// θ(k) for −1 ≤ k ≤ s, the point count of PG(k, q²).
    pub fn theta(&self, k: i64) -> u64 {
        debug_assert!(k >= -1 && k <= self.s as i64);
        self.theta[(k + 1) as usize]
    }

    /// Scales a nonzero vector so its leftmost nonzero coordinate is 1.
    pub fn normalize(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.check_dim(v.len())?;
        let lead = v.iter().position(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
        let inv = self.field.inv(v[lead])?;
        Ok(v.iter().map(|&c| self.field.mul(inv, c)).collect())
    }

    pub fn point(&self, v: &[FieldElement]) -> Result<ProjectivePoint> {
        Ok(ProjectivePoint {
            coords: self.normalize(v)?,
        })
    }

    pub fn hyperplane(&self, v: &[FieldElement]) -> Result<Hyperplane> {
        Ok(Hyperplane {
            dual: self.normalize(v)?,
        })
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got == self.n_coords() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n_coords(),
                got,
            })
        }
    }

    /// Rank of a normalized coordinate tuple in lexicographic order.
    ///
    /// Tuples are compared coordinate by coordinate on integer encodings, so
    /// (0,…,0,1) has index 0 and (1,Q−1,…,Q−1) index θ(s)−1.
    pub fn index_of_coords(&self, coords: &[FieldElement]) -> usize {
        debug_assert_eq!(coords.len(), self.n_coords());
        let lead = coords.iter().position(|c| !c.is_zero()).expect("nonzero");
        debug_assert_eq!(coords[lead], FieldElement::ONE, "not normalized");
        let mut idx = self.theta[self.s - lead];
        for (j, &c) in coords.iter().enumerate().skip(lead + 1) {
            idx += c.encoding() * self.q_pows[self.s - j];
        }
        idx as usize
    }

    fn coords_from_index(&self, idx: usize) -> Vec<FieldElement> {
        let order = self.field.order();
        let mut rem = idx as u64;
        let mut lead = self.s;
        for i in (0..=self.s).rev() {
            let count = self.q_pows[self.s - i];
            if rem < count {
                lead = i;
                break;
            }
            rem -= count;
        }
        let mut coords = vec![FieldElement::ZERO; self.n_coords()];
        coords[lead] = FieldElement::ONE;
        for j in lead + 1..=self.s {
            let digit = rem / self.q_pows[self.s - j] % order;
            coords[j] = self.field.element(digit).expect("digit < order");
        }
        coords
    }

    pub fn point_index(&self, p: &ProjectivePoint) -> usize {
        self.index_of_coords(&p.coords)
    }

    pub fn point_from_index(&self, idx: usize) -> ProjectivePoint {
        ProjectivePoint {
            coords: self.coords_from_index(idx),
        }
    }

    pub fn hyperplane_index(&self, h: &Hyperplane) -> usize {
        self.index_of_coords(&h.dual)
    }

    pub fn hyperplane_from_index(&self, idx: usize) -> Hyperplane {
        Hyperplane {
            dual: self.coords_from_index(idx),
        }
    }

    /// All points in index order.
    pub fn points(&self) -> impl Iterator<Item = ProjectivePoint> + '_ {
        (0..self.point_count()).map(|i| self.point_from_index(i))
    }

    /// All hyperplanes in index order.
    pub fn hyperplanes(&self) -> impl Iterator<Item = Hyperplane> + '_ {
        (0..self.point_count()).map(|i| self.hyperplane_from_index(i))
    }

    pub(crate) fn dot(&self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        for (&x, &y) in a.iter().zip(b) {
            acc = self.field.add(acc, self.field.mul(x, y));
        }
        acc
    }

    /// Whether x lies on H, i.e. Σ dualᵢ·xᵢ = 0.
    pub fn incident(&self, x: &ProjectivePoint, h: &Hyperplane) -> Result<bool> {
        self.check_dim(x.coords.len())?;
        self.check_dim(h.dual.len())?;
        Ok(self.dot(&h.dual, &x.coords).is_zero())
    }

    /// Visits the index of every point on the hyperplane, by parametrizing
    /// the kernel of its dual vector (θ(s−1) points, no full-space scan).
    pub fn for_each_point_on_hyperplane<F: FnMut(usize)>(&self, h: &Hyperplane, mut f: F) {
        let field = &self.field;
        let n = self.n_coords();
        let pivot = h.dual.iter().position(|c| !c.is_zero()).expect("nonzero");
        let free: Vec<usize> = (0..n).filter(|&j| j != pivot).collect();
        let tally = self.theta[self.s]; // θ(s−1) kernel points
        let mut x = vec![FieldElement::ZERO; n];
        let mut tail = vec![FieldElement::ZERO; free.len()];
        for t in 0..tally {
            self.kernel_tuple(t, &mut tail);
            let mut acc = FieldElement::ZERO;
            for (k, &j) in free.iter().enumerate() {
                x[j] = tail[k];
                acc = field.add(acc, field.mul(h.dual[j], tail[k]));
            }
            x[pivot] = field.neg(acc);
            // renormalize when the pivot coordinate leads
            let lead = x.iter().position(|c| !c.is_zero()).expect("nonzero");
            if x[lead] != FieldElement::ONE {
                let inv = field.inv(x[lead]).expect("nonzero lead");
                for c in x.iter_mut() {
                    *c = field.mul(inv, *c);
                }
            }
            f(self.index_of_coords(&x));
        }
    }

    /// Writes the rank-`t` normalized tuple of PG(s−1) into `out`
    /// (the same lexicographic scheme as point indexing, one dimension down).
    fn kernel_tuple(&self, t: u64, out: &mut [FieldElement]) {
        let order = self.field.order();
        let top = out.len() - 1;
        let mut rem = t;
        let mut lead = top;
        for i in (0..=top).rev() {
            let count = self.q_pows[top - i];
            if rem < count {
                lead = i;
                break;
            }
            rem -= count;
        }
        out.fill(FieldElement::ZERO);
        out[lead] = FieldElement::ONE;
        for j in lead + 1..=top {
            let digit = rem / self.q_pows[top - j] % order;
            out[j] = self.field.element(digit).expect("digit < order");
        }
    }

    /// Canonical RREF of the dual span of two hyperplanes.
    pub fn codim2_from_hyperplanes(
        &self,
        h1: &Hyperplane,
        h2: &Hyperplane,
    ) -> Result<CodimTwoSubspace> {
        self.rref2(h1.dual.clone(), h2.dual.clone())
    }

    fn rref2(
        &self,
        mut r0: Vec<FieldElement>,
        mut r1: Vec<FieldElement>,
    ) -> Result<CodimTwoSubspace> {
        let field = &self.field;
        let n = self.n_coords();
        self.check_dim(r0.len())?;
        self.check_dim(r1.len())?;
        let j0 = match (0..n).find(|&j| !r0[j].is_zero() || !r1[j].is_zero()) {
            Some(j) => j,
            None => return Err(Error::RankDeficient),
        };
        if r0[j0].is_zero() {
            std::mem::swap(&mut r0, &mut r1);
        }
        let inv = field.inv(r0[j0])?;
        for c in r0.iter_mut() {
            *c = field.mul(inv, *c);
        }
        let factor = r1[j0];
        if !factor.is_zero() {
            for j in 0..n {
                r1[j] = field.sub(r1[j], field.mul(factor, r0[j]));
            }
        }
        let j1 = match (0..n).find(|&j| !r1[j].is_zero()) {
            Some(j) => j,
            None => return Err(Error::RankDeficient),
        };
        let inv = field.inv(r1[j1])?;
        for c in r1.iter_mut() {
            *c = field.mul(inv, *c);
        }
        let factor = r0[j1];
        if !factor.is_zero() {
            for j in 0..n {
                r0[j] = field.sub(r0[j], field.mul(factor, r1[j]));
            }
        }
        Ok(CodimTwoSubspace { rows: [r0, r1] })
    }

    /// Whether x lies on the codimension-2 subspace (both dual rows vanish).
    pub fn on_codim2(&self, w: &CodimTwoSubspace, x: &ProjectivePoint) -> bool {
        self.dot(&w.rows[0], &x.coords).is_zero() && self.dot(&w.rows[1], &x.coords).is_zero()
    }

    /// The q²+1 hyperplanes through the subspace: the combinations
    /// r0 + λ·r1 for λ in GF(q²), then r1. All come out normalized because
    /// of the RREF shape.
    pub fn pencil(&self, w: &CodimTwoSubspace) -> Vec<Hyperplane> {
        let field = &self.field;
        let n = self.n_coords();
        let mut out = Vec::with_capacity(field.order() as usize + 1);
        for lambda in field.elements() {
            let mut dual = vec![FieldElement::ZERO; n];
            for j in 0..n {
                dual[j] = field.add(w.rows[0][j], field.mul(lambda, w.rows[1][j]));
            }
            out.push(Hyperplane { dual });
        }
        out.push(Hyperplane {
            dual: w.rows[1].clone(),
        });
        out
    }

    /// Indices of the pencil hyperplanes, computed without allocating
    /// coordinate vectors. Order matches `pencil`.
    pub fn pencil_indices(&self, w: &CodimTwoSubspace, out: &mut Vec<usize>) {
        out.clear();
        let field = &self.field;
        let s = self.s;
        let (j0, j1) = w.pivots();
        for lambda in field.elements() {
            // r0 + λ·r1 has leading 1 at column j0
            let mut idx = self.theta[s - j0];
            for j in j0 + 1..=s {
                let c = field.add(w.rows[0][j], field.mul(lambda, w.rows[1][j]));
                idx += c.encoding() * self.q_pows[s - j];
            }
            out.push(idx as usize);
        }
        let mut idx = self.theta[s - j1];
        for j in j1 + 1..=s {
            idx += w.rows[1][j].encoding() * self.q_pows[s - j];
        }
        out.push(idx as usize);
    }

    /// Exact number of codimension-2 subspaces, the Gaussian binomial
    /// [s+1 choose 2] over q².
    pub fn codim2_count(&self) -> Result<u128> {
        gaussian_count(self.s as u64 + 1, 2, self.field.order())
    }

    /// Streams every codimension-2 subspace exactly once in canonical order,
    /// passing (rank, subspace) to the visitor. Returns the number visited.
    pub fn for_each_codim2<F: FnMut(u128, &CodimTwoSubspace)>(&self, mut f: F) -> Result<u128> {
        let total = self.codim2_count()?;
        if total > self.limits.max_codim2 as u128 {
            return Err(Error::EnumerationBound {
                what: "codimension-2 subspaces",
                count: total,
                limit: self.limits.max_codim2 as u128,
            });
        }
        let n = self.n_coords();
        let order = self.field.order();
        let mut scratch = CodimTwoSubspace {
            rows: [
                vec![FieldElement::ZERO; n],
                vec![FieldElement::ZERO; n],
            ],
        };
        let mut rank: u128 = 0;
        for j0 in 0..n - 1 {
            for j1 in j0 + 1..n {
                let free: Vec<(usize, usize)> = (j0 + 1..n)
                    .filter(|&j| j != j1)
                    .map(|j| (0, j))
                    .chain((j1 + 1..n).map(|j| (1, j)))
                    .collect();
                let mut digits = vec![0u64; free.len()];
                loop {
                    for row in scratch.rows.iter_mut() {
                        row.fill(FieldElement::ZERO);
                    }
                    scratch.rows[0][j0] = FieldElement::ONE;
                    scratch.rows[1][j1] = FieldElement::ONE;
                    for (k, &(r, j)) in free.iter().enumerate() {
                        scratch.rows[r][j] = self.field.element(digits[k]).expect("digit");
                    }
                    f(rank, &scratch);
                    rank += 1;
                    // big-endian odometer over the free entries
                    let mut k = free.len();
                    loop {
                        if k == 0 {
                            break;
                        }
                        k -= 1;
                        digits[k] += 1;
                        if digits[k] < order {
                            break;
                        }
                        digits[k] = 0;
                        if k == 0 {
                            break;
                        }
                    }
                    if digits.iter().all(|&d| d == 0) {
                        break;
                    }
                }
            }
        }
        debug_assert_eq!(rank, total);
        Ok(rank)
    }

    /// Streams every codimension-2 subspace with the indices of its pencil
    /// hyperplanes; the workhorse behind all codimension-2 spectra.
    pub fn for_each_pencil<F: FnMut(u128, &CodimTwoSubspace, &[usize])>(
        &self,
        mut f: F,
    ) -> Result<u128> {
        let mut pencil = Vec::with_capacity(self.field.order() as usize + 1);
        self.for_each_codim2(|rank, w| {
            self.pencil_indices(w, &mut pencil);
            f(rank, w, &pencil);
        })
    }

    /// Visits `n_samples` codimension-2 subspaces drawn uniformly (with
    /// replacement) from the canonical enumeration, seeded and reproducible.
    pub fn sample_pencils<F: FnMut(u128, &CodimTwoSubspace, &[usize])>(
        &self,
        n_samples: u64,
        seed: u64,
        mut f: F,
    ) -> Result<u64> {
        use rand::Rng;
        use rand::SeedableRng;
        let total = self.codim2_count()?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut pencil = Vec::with_capacity(self.field.order() as usize + 1);
        for _ in 0..n_samples {
            let rank = rng.random_range(0..total);
            let w = self.codim2_from_rank(rank)?;
            self.pencil_indices(&w, &mut pencil);
            f(rank, &w, &pencil);
        }
        Ok(n_samples)
    }

    /// Random access into the canonical codimension-2 order; inverse of the
    /// rank handed out by `for_each_codim2`.
    pub fn codim2_from_rank(&self, rank: u128) -> Result<CodimTwoSubspace> {
        let n = self.n_coords();
        let order = self.field.order() as u128;
        let mut rem = rank;
        for j0 in 0..n - 1 {
            for j1 in j0 + 1..n {
                let f0 = n - 2 - j0;
                let f1 = n - 1 - j1;
                let count = order
                    .checked_pow((f0 + f1) as u32)
                    .ok_or(Error::CountOverflow)?;
                if rem >= count {
                    rem -= count;
                    continue;
                }
                let free: Vec<(usize, usize)> = (j0 + 1..n)
                    .filter(|&j| j != j1)
                    .map(|j| (0, j))
                    .chain((j1 + 1..n).map(|j| (1, j)))
                    .collect();
                let mut rows = [
                    vec![FieldElement::ZERO; n],
                    vec![FieldElement::ZERO; n],
                ];
                rows[0][j0] = FieldElement::ONE;
                rows[1][j1] = FieldElement::ONE;
                for &(r, j) in free.iter().rev() {
                    let digit = (rem % order) as u64;
                    rem /= order;
                    rows[r][j] = self.field.element(digit).expect("digit");
                }
                return Ok(CodimTwoSubspace { rows });
            }
        }
        Err(Error::EnumerationBound {
            what: "codimension-2 rank",
            count: rank,
            limit: self.codim2_count()?,
        })
    }
}

/// The Gaussian binomial [n choose k] over GF(Q), by the exact iterative
/// product; errors on overflow rather than wrapping.
pub fn gaussian_count(n: u64, k: u64, order: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let q = order as u128;
    let mut result: u128 = 1;
    for i in 0..k {
        let num = q
            .checked_pow((n - i) as u32)
            .ok_or(Error::CountOverflow)?
            - 1;
        let den = q.checked_pow((i + 1) as u32).ok_or(Error::CountOverflow)? - 1;
        let prod = result.checked_mul(num).ok_or(Error::CountOverflow)?;
        if prod % den != 0 {
            return Err(Error::NonIntegralDivision {
                num: prod as i128,
                den: den as i128,
            });
        }
        result = prod / den;
    }
    Ok(result)
}
