//! Quasi-Hermitian variety testing and the pivoted-set construction: replace
//! one tangent cone of H(3, q²) by the cone over an arbitrary (q+1)-subset of
//! its base line. The result keeps the hyperplane intersection numbers of the
//! variety while breaking its codimension-2 ones.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermitian::{
    cone, evaluate, hyperplane_counts, hyperplane_spectrum, polar, variety_points, ExpectedCounts,
    HermitianForm, IncidenceCache,
};
use crate::projective::{CodimTwoSubspace, ProjectiveSpace};
use crate::sets::{HyperplaneFamily, PointSet, SpectrumReport};

/// How the replacement section was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PivotChoice {
    /// Lowest-index vertex and line; the lowest-index base point swapped for
    /// the lowest-index off-base point of the line.
    Default,
    /// Vertex, line, and replacement drawn from a seeded generator.
    Seeded(u64),
}

/// A fully resolved pivot: vertex point p on the variety, a line L of the
/// tangent plane at p not through p, and a (q+1)-point replacement for the
/// base section B = L ∩ H.
#[derive(Debug, Clone)]
pub struct PivotSpec {
    pub vertex: usize,
    pub line: CodimTwoSubspace,
    pub base: Vec<usize>,
    pub replacement: Vec<usize>,
    pub choice: PivotChoice,
}

/// The deterministic line of the tangent plane at p avoiding p (lowest
/// canonical rank), together with its variety section B, |B| = q+1.
pub fn base_of_tangent_cone(
    space: &ProjectiveSpace,
    form: &HermitianForm,
    vertex: usize,
) -> Result<(CodimTwoSubspace, PointSet)> {
    require_s3(space)?;
    let p = space.point_from_index(vertex);
    if !evaluate(space, form, p.coords())?.is_zero() {
        return Err(Error::PointOffVariety);
    }
    let tangent = polar(space, form, &p)?;
    let t_idx = space.hyperplane_index(&tangent);
    let mut found: Option<CodimTwoSubspace> = None;
    space.for_each_pencil(|_, w, pencil| {
        if found.is_none() && pencil.contains(&t_idx) && !space.on_codim2(w, &p) {
            found = Some(w.clone());
        }
    })?;
    let line = found.expect("every tangent plane contains lines avoiding its pole");
    let variety = variety_points(space, form)?;
    let mut base = PointSet::new(space.point_count());
    for idx in points_on_line(space, &line) {
        if variety.contains(idx) {
            base.insert(idx);
        }
    }
    debug_assert_eq!(base.len() as u64, space.field().q() + 1);
    Ok((line, base))
}

fn points_on_line(space: &ProjectiveSpace, line: &CodimTwoSubspace) -> Vec<usize> {
    (0..space.point_count())
        .filter(|&i| space.on_codim2(line, &space.point_from_index(i)))
        .collect()
}

fn require_s3(space: &ProjectiveSpace) -> Result<()> {
    if space.s() == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension {
            expected: 3,
            got: space.s(),
        })
    }
}

/// The reproducible default pivot: lowest-index vertex, lowest-index line,
/// one lowest-index swap.
pub fn default_pivot(space: &ProjectiveSpace, form: &HermitianForm) -> Result<PivotSpec> {
    require_s3(space)?;
    let variety = variety_points(space, form)?;
    let vertex = variety.iter().next().ok_or(Error::ZeroVector)?;
    let (line, base) = base_of_tangent_cone(space, form, vertex)?;
    let base_indices: Vec<usize> = base.iter().collect();
    let swapped_in = points_on_line(space, &line)
        .into_iter()
        .find(|i| !base.contains(*i))
        .expect("a line has more than q+1 points");
    let mut replacement: Vec<usize> = base_indices[1..].to_vec();
    replacement.push(swapped_in);
    replacement.sort_unstable();
    Ok(PivotSpec {
        vertex,
        line,
        base: base_indices,
        replacement,
        choice: PivotChoice::Default,
    })
}

/// A seeded random pivot: random vertex, random qualifying line, random
/// replacement section distinct from the base.
pub fn seeded_pivot(space: &ProjectiveSpace, form: &HermitianForm, seed: u64) -> Result<PivotSpec> {
    require_s3(space)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let variety = variety_points(space, form)?;
    let on_variety: Vec<usize> = variety.iter().collect();
    let vertex = on_variety[rng.random_range(0..on_variety.len())];

    let p = space.point_from_index(vertex);
    let tangent = polar(space, form, &p)?;
    let t_idx = space.hyperplane_index(&tangent);
    let mut candidates = Vec::new();
    space.for_each_pencil(|_, w, pencil| {
        if pencil.contains(&t_idx) && !space.on_codim2(w, &p) {
            candidates.push(w.clone());
        }
    })?;
    let line = candidates[rng.random_range(0..candidates.len())].clone();

    let line_points = points_on_line(space, &line);
    let base: Vec<usize> = line_points
        .iter()
        .copied()
        .filter(|&i| variety.contains(i))
        .collect();
    let take = space.field().q() as usize + 1;
    let replacement = loop {
        let mut pool = line_points.clone();
        pool.shuffle(&mut rng);
        let mut pick: Vec<usize> = pool[..take].to_vec();
        pick.sort_unstable();
        if pick != base {
            break pick;
        }
    };
    Ok(PivotSpec {
        vertex,
        line,
        base,
        replacement,
        choice: PivotChoice::Seeded(seed),
    })
}

/// S = (H ∖ cone(p, B)) ∪ cone(p, B′): same size as the variety, with the
/// tangent cone at p rebuilt over the replacement section.
pub fn pivoted_set(
    space: &ProjectiveSpace,
    form: &HermitianForm,
    spec: &PivotSpec,
) -> Result<PointSet> {
    require_s3(space)?;
    let q = space.field().q();
    let (line, base) = base_of_tangent_cone_at(space, form, spec.vertex, &spec.line)?;
    if spec.replacement.len() as u64 != q + 1 {
        return Err(Error::ReplacementSize {
            expected: q as usize + 1,
            got: spec.replacement.len(),
        });
    }
    for &idx in &spec.replacement {
        if !space.on_codim2(&line, &space.point_from_index(idx)) {
            return Err(Error::ReplacementOffLine { index: idx });
        }
    }
    let base_sorted: Vec<usize> = base.iter().collect();
    let mut replacement_sorted = spec.replacement.clone();
    replacement_sorted.sort_unstable();
    replacement_sorted.dedup();
    if replacement_sorted.len() as u64 != q + 1 {
        return Err(Error::ReplacementSize {
            expected: q as usize + 1,
            got: replacement_sorted.len(),
        });
    }
    if replacement_sorted == base_sorted {
        return Err(Error::ReplacementIsBase);
    }

    let vertex_set = PointSet::from_indices(space.point_count(), [spec.vertex]);
    let removed = cone(space, &vertex_set, &base)?;
    let added = cone(
        space,
        &vertex_set,
        &PointSet::from_indices(space.point_count(), replacement_sorted),
    )?;
    let variety = variety_points(space, form)?;
    let mut bits = variety.bits().clone();
    bits.difference_with(removed.bits());
    bits.union_with(added.bits());
    let pivoted = PointSet::from_bits(bits);
    debug_assert_eq!(pivoted.len(), variety.len());
    debug_assert!(pivoted.contains(spec.vertex));
    Ok(pivoted)
}

/// Validates the stored line against the vertex and recomputes the base.
fn base_of_tangent_cone_at(
    space: &ProjectiveSpace,
    form: &HermitianForm,
    vertex: usize,
    line: &CodimTwoSubspace,
) -> Result<(CodimTwoSubspace, PointSet)> {
    let p = space.point_from_index(vertex);
    if !evaluate(space, form, p.coords())?.is_zero() {
        return Err(Error::PointOffVariety);
    }
    if space.on_codim2(line, &p) {
        return Err(Error::VertexMeetsBase);
    }
    let tangent = polar(space, form, &p)?;
    let t_idx = space.hyperplane_index(&tangent);
    let mut pencil = Vec::new();
    space.pencil_indices(line, &mut pencil);
    if !pencil.contains(&t_idx) {
        return Err(Error::LineNotInTangentPlane);
    }
    let variety = variety_points(space, form)?;
    let mut base = PointSet::new(space.point_count());
    for idx in points_on_line(space, line) {
        if variety.contains(idx) {
            base.insert(idx);
        }
    }
    Ok((line.clone(), base))
}

/// True iff every hyperplane meets X in m₁ or m₂ points; the observed
/// spectrum is returned either way.
pub fn is_quasi_hermitian(
    space: &ProjectiveSpace,
    cache: &IncidenceCache,
    x: &PointSet,
) -> Result<(bool, SpectrumReport)> {
    let counts = ExpectedCounts::new(space.s() as u64, space.field().q())?;
    let report = hyperplane_spectrum(space, cache, x)?;
    let ok = report.support_within(&[counts.m1, counts.m2]);
    Ok((ok, report))
}

/// All hyperplanes meeting X in exactly `size` points.
pub fn family_meeting_in(
    space: &ProjectiveSpace,
    cache: &IncidenceCache,
    x: &PointSet,
    size: u64,
) -> Result<HyperplaneFamily> {
    let counts = hyperplane_counts(space, cache, x)?;
    let mut family = HyperplaneFamily::new(space.point_count());
    for (idx, &c) in counts.iter().enumerate() {
        if c == size {
            family.insert(idx);
        }
    }
    Ok(family)
}

/// Multiset, over all codimension-2 subspaces, of how many members of F
/// pass through each.
pub fn containment_spectrum(
    space: &ProjectiveSpace,
    family: &HyperplaneFamily,
) -> Result<SpectrumReport> {
    let mut report = SpectrumReport::new();
    space.for_each_pencil(|_, _, pencil| {
        let k = pencil.iter().filter(|&&h| family.contains(h)).count();
        report.record(k as u64);
    })?;
    Ok(report)
}
