//! Cross-module invariants checked by independent routes: counting
//! identities, cone/section equality over every tangent plane, stream/rank
//! agreement at scale, and randomized structural properties.

use std::sync::LazyLock;

use proptest::prelude::*;

use pgherm::galois::{Field, FieldElement};
use pgherm::hermitian::{
    classify_hyperplane, cone, hyperplane_counts, nontangent_family, pole, variety_points,
    ExpectedCounts, HermitianForm, IncidenceCache, Tangency,
};
use pgherm::projective::{gaussian_count, ProjectiveSpace};
use pgherm::quasi::{base_of_tangent_cone, default_pivot, is_quasi_hermitian, pivoted_set};
use pgherm::sets::{HyperplaneFamily, PointSet};
use pgherm::{files, verifier};

struct Ctx {
    space: ProjectiveSpace,
    form: HermitianForm,
    cache: IncidenceCache,
    variety: PointSet,
}

impl Ctx {
    fn build(p: u64, e: u32, s: usize) -> Ctx {
        let space = ProjectiveSpace::new(Field::new(p, e).unwrap(), s).unwrap();
        let form = HermitianForm::standard(&space);
        let cache = IncidenceCache::build(&space);
        let variety = variety_points(&space, &form).unwrap();
        Ctx {
            space,
            form,
            cache,
            variety,
        }
    }
}

static CTX33: LazyLock<Ctx> = LazyLock::new(|| Ctx::build(3, 1, 3));
static CTX34: LazyLock<Ctx> = LazyLock::new(|| Ctx::build(2, 2, 3));

#[test]
fn duality_every_object_has_theta_s_minus_1_incidences() {
    let ctx = &*CTX33;
    for i in 0..ctx.space.point_count() {
        let row_count = ctx
            .cache
            .intersection_len(i, &pgherm::sets::DenseBitSet::from_indices(820, 0..820));
        assert_eq!(row_count, 91);
    }
}

#[test]
fn codim2_per_hyperplane_double_count() {
    let ctx = &*CTX33;
    let mut per_hyperplane = vec![0u64; ctx.space.point_count()];
    ctx.space
        .for_each_pencil(|_, _, pencil| {
            for &h in pencil {
                per_hyperplane[h] += 1;
            }
        })
        .unwrap();
    // every plane of PG(3,9) contains exactly [3,2]_9 = 91 lines
    assert!(per_hyperplane.iter().all(|&c| c == 91));
    let total: u64 = per_hyperplane.iter().sum();
    assert_eq!(
        total as u128,
        gaussian_count(4, 2, 9).unwrap() * 10 // each line in q²+1 planes
    );
}

#[test]
fn tangency_oracle_equivalence_at_33_and_34() {
    for ctx in [&*CTX33, &*CTX34] {
        let counts =
            ExpectedCounts::new(ctx.space.s() as u64, ctx.space.field().q()).unwrap();
        for idx in 0..ctx.space.point_count() {
            let h = ctx.space.hyperplane_from_index(idx);
            let algebraic = classify_hyperplane(&ctx.space, &ctx.form, &h).unwrap();
            let size = ctx.cache.intersection_len(idx, ctx.variety.bits());
            let by_count = if size == counts.m2 {
                Tangency::Tangent
            } else {
                assert_eq!(size, counts.m1);
                Tangency::NonTangent
            };
            assert_eq!(algebraic, by_count, "hyperplane {idx}");
        }
    }
}

fn line_through(
    space: &ProjectiveSpace,
    a: usize,
    b: usize,
) -> Vec<usize> {
    let field = space.field().clone();
    let pa = space.point_from_index(a);
    let pb = space.point_from_index(b);
    let mut out = vec![b];
    let mut combo = vec![FieldElement::ZERO; space.n_coords()];
    for lambda in field.elements() {
        for j in 0..space.n_coords() {
            combo[j] = field.add(pa.coords()[j], field.mul(lambda, pb.coords()[j]));
        }
        out.push(space.index_of_coords(&space.normalize(&combo).unwrap()));
    }
    out.sort_unstable();
    out
}

/// Every tangent-plane section is the cone over a base-line section with the
/// pole as vertex, checked set-for-set over all 280 tangent planes.
#[test]
fn tangent_sections_are_cones_exhaustively_at_33() {
    let ctx = &*CTX33;
    let mut tangent_planes = 0;
    for idx in 0..ctx.space.point_count() {
        let h = ctx.space.hyperplane_from_index(idx);
        if classify_hyperplane(&ctx.space, &ctx.form, &h).unwrap() != Tangency::Tangent {
            continue;
        }
        tangent_planes += 1;
        let p = pole(&ctx.space, &ctx.form, &h).unwrap();
        let p_idx = ctx.space.point_index(&p);
        let mut section = PointSet::new(ctx.space.point_count());
        for x in ctx.variety.iter() {
            if ctx.cache.incident(x, idx) {
                section.insert(x);
            }
        }
        assert_eq!(section.len(), 37);
        assert!(section.contains(p_idx));
        // pick u, v on distinct generators; line(u, v) lies in the plane and
        // misses the pole, so it serves as a base line
        let u = section.iter().find(|&x| x != p_idx).unwrap();
        let generator_u = line_through(&ctx.space, p_idx, u);
        let v = section
            .iter()
            .find(|&x| x != p_idx && generator_u.binary_search(&x).is_err())
            .unwrap();
        let base_line = line_through(&ctx.space, u, v);
        assert!(base_line.binary_search(&p_idx).is_err());
        let base = PointSet::from_indices(
            ctx.space.point_count(),
            base_line.iter().copied().filter(|&x| section.contains(x)),
        );
        assert_eq!(base.len(), 4);
        let vertex = PointSet::from_indices(ctx.space.point_count(), [p_idx]);
        let rebuilt = cone(&ctx.space, &vertex, &base).unwrap();
        assert_eq!(rebuilt, section, "tangent plane {idx}");
    }
    assert_eq!(tangent_planes, 280);
}

/// The default pivot line and base agree with the generic cone structure,
/// and every one of the 209 valid replacement sections yields a
/// quasi-Hermitian set of the right size.
#[test]
fn all_replacement_sections_pivot_to_quasi_hermitian_sets_at_33() {
    let ctx = &*CTX33;
    let spec = default_pivot(&ctx.space, &ctx.form).unwrap();
    let (line, base) = base_of_tangent_cone(&ctx.space, &ctx.form, spec.vertex).unwrap();
    let line_points: Vec<usize> = (0..ctx.space.point_count())
        .filter(|&i| ctx.space.on_codim2(&line, &ctx.space.point_from_index(i)))
        .collect();
    assert_eq!(line_points.len(), 10);
    let base_sorted: Vec<usize> = base.iter().collect();

    let mut tried = 0;
    // all 4-subsets of the 10 line points
    for a in 0..10 {
        for b in a + 1..10 {
            for c in b + 1..10 {
                for d in c + 1..10 {
                    let replacement = vec![
                        line_points[a],
                        line_points[b],
                        line_points[c],
                        line_points[d],
                    ];
                    if replacement == base_sorted {
                        continue;
                    }
                    let mut candidate = spec.clone();
                    candidate.replacement = replacement;
                    let pivoted = pivoted_set(&ctx.space, &ctx.form, &candidate).unwrap();
                    assert_eq!(pivoted.len(), 280);
                    let (quasi, _) =
                        is_quasi_hermitian(&ctx.space, &ctx.cache, &pivoted).unwrap();
                    assert!(quasi);
                    // but never with Hermitian line sections: a secant
                    // through a swapped-in point meets S in q+2 points
                    let lines =
                        pgherm::hermitian::codim2_spectrum(&ctx.space, &ctx.cache, &pivoted)
                            .unwrap();
                    assert!(!lines.support_within(&[1, 4, 10]));
                    assert!(lines.multiplicity(5) > 0);
                    tried += 1;
                }
            }
        }
    }
    assert_eq!(tried, 209);
}

/// Stream order and random access agree at (4,3) scale.
#[test]
fn codim2_rank_access_matches_stream_at_43() {
    let space = ProjectiveSpace::new(Field::new(3, 1).unwrap(), 4).unwrap();
    let total = space.codim2_count().unwrap();
    assert_eq!(total, 605_242);
    let probes: Vec<u128> = (0..20).map(|i| i * 30_000 + 17).collect();
    let mut seen = Vec::new();
    space
        .for_each_codim2(|rank, w| {
            if probes.contains(&rank) {
                seen.push((rank, w.clone()));
            }
        })
        .unwrap();
    assert_eq!(seen.len(), probes.len());
    for (rank, w) in seen {
        assert_eq!(space.codim2_from_rank(rank).unwrap(), w);
    }
}

/// Black counts per hyperplane from the bit kernel agree with a raw
/// incidence recount on a sample, for an arbitrary (non-variety) point set.
#[test]
fn hyperplane_counts_match_raw_incidence_on_arbitrary_sets() {
    let ctx = &*CTX33;
    let arbitrary = PointSet::from_indices(
        ctx.space.point_count(),
        (0..ctx.space.point_count()).filter(|i| i % 7 == 0),
    );
    let fast = hyperplane_counts(&ctx.space, &ctx.cache, &arbitrary).unwrap();
    for idx in (0..ctx.space.point_count()).step_by(41) {
        let h = ctx.space.hyperplane_from_index(idx);
        let slow = arbitrary
            .iter()
            .filter(|&x| {
                ctx.space
                    .incident(&ctx.space.point_from_index(x), &h)
                    .unwrap()
            })
            .count() as u64;
        assert_eq!(fast[idx], slow);
    }
}

/// Certification is a pure function of its inputs: rerunning yields an
/// identical serialized certificate.
#[test]
fn certificates_are_deterministic() {
    let ctx = &*CTX33;
    let family = nontangent_family(&ctx.space, &ctx.form).unwrap();
    let a = verifier::certify(
        &ctx.space,
        &ctx.cache,
        &family,
        verifier::Codim2Mode::Full,
        Some(&ctx.form),
    )
    .unwrap();
    let b = verifier::certify(
        &ctx.space,
        &ctx.cache,
        &family,
        verifier::Codim2Mode::Full,
        Some(&ctx.form),
    )
    .unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

proptest! {
    #[test]
    fn normalize_is_idempotent_and_scale_invariant(
        raw in prop::collection::vec(0u64..16, 4),
        lambda in 1u64..16,
    ) {
        let ctx = &*CTX34;
        let field = ctx.space.field().clone();
        let coords: Vec<FieldElement> =
            raw.iter().map(|&e| field.element(e).unwrap()).collect();
        prop_assume!(coords.iter().any(|c| !c.is_zero()));
        let normalized = ctx.space.normalize(&coords).unwrap();
        prop_assert_eq!(ctx.space.normalize(&normalized).unwrap(), normalized.clone());
        let lam = field.element(lambda).unwrap();
        let scaled: Vec<FieldElement> = coords.iter().map(|&c| field.mul(lam, c)).collect();
        prop_assert_eq!(ctx.space.normalize(&scaled).unwrap(), normalized.clone());
        // the index round-trips through the canonical form
        let idx = ctx.space.index_of_coords(&normalized);
        let roundtrip = ctx.space.point_from_index(idx);
        prop_assert_eq!(roundtrip.coords(), &normalized[..]);
    }

    #[test]
    fn point_set_files_roundtrip(indices in prop::collection::btree_set(0usize..820, 0..60)) {
        let ctx = &*CTX33;
        let set = PointSet::from_indices(ctx.space.point_count(), indices);
        let mut buf = Vec::new();
        files::write_point_set(&mut buf, &ctx.space, &set).unwrap();
        prop_assert_eq!(files::read_point_set(buf.as_slice(), &ctx.space).unwrap(), set);
    }

    #[test]
    fn family_files_roundtrip(indices in prop::collection::btree_set(0usize..820, 1..60)) {
        let ctx = &*CTX33;
        let family = HyperplaneFamily::from_indices(ctx.space.point_count(), indices);
        let mut buf = Vec::new();
        files::write_family(&mut buf, &ctx.space, &family).unwrap();
        prop_assert_eq!(files::read_family(buf.as_slice(), &ctx.space).unwrap(), family);
    }

    #[test]
    fn pencil_sum_identity_holds_for_arbitrary_point_sets(
        indices in prop::collection::btree_set(0usize..820, 0..100),
        rank in 0u64..7462,
    ) {
        // the partition identity behind every codimension-2 kernel:
        // Σ_{H ∈ pencil(W)} |H ∩ T| = q²·|W ∩ T| + |T| for any T
        let ctx = &*CTX33;
        let target = PointSet::from_indices(ctx.space.point_count(), indices);
        let counts = hyperplane_counts(&ctx.space, &ctx.cache, &target).unwrap();
        let w = ctx.space.codim2_from_rank(rank as u128).unwrap();
        let mut pencil = Vec::new();
        ctx.space.pencil_indices(&w, &mut pencil);
        let sum: u64 = pencil.iter().map(|&h| counts[h]).sum();
        let direct = (0..ctx.space.point_count())
            .filter(|&i| target.contains(i)
                && ctx.space.on_codim2(&w, &ctx.space.point_from_index(i)))
            .count() as u64;
        prop_assert_eq!(sum, 9 * direct + target.len() as u64);
    }
}
