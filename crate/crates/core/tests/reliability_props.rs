use proptest::prelude::*;

use raidlay::reliability::{minimal_path_sets, ReliabilityPolynomial};
use raidlay::search::maximizers;
use raidlay::{
    coverage, exact_reliability, ft_degree, generate_named, koon_reliability,
    monte_carlo_reliability, search_pp_offsets, search_rp_offsets, Scheme,
};

proptest! {
    #[test]
    fn exact_is_monotone_and_matches_polynomial(
        scheme in prop::sample::select(Scheme::ALL.to_vec()),
        n in 5usize..=9,
        p in 0.0f64..=1.0,
        dp in 0.0f64..=0.2,
    ) {
        let layout = generate_named(scheme, n).unwrap();
        let lo = exact_reliability(&layout, p).unwrap();
        let hi = exact_reliability(&layout, (p + dp).min(1.0)).unwrap();
        prop_assert!(hi >= lo - 1e-12);
        let poly = ReliabilityPolynomial::of(&layout).unwrap();
        prop_assert!((poly.evaluate(p) - lo).abs() < 1e-12);
    }

    #[test]
    fn guaranteed_tolerance_never_exceeds_exact(
        scheme in prop::sample::select(Scheme::ALL.to_vec()),
        n in 5usize..=9,
        p in 0.0f64..=1.0,
    ) {
        let layout = generate_named(scheme, n).unwrap();
        let degree = ft_degree(&layout).0;
        let guaranteed = koon_reliability(n - degree, n, p).unwrap();
        prop_assert!(guaranteed <= exact_reliability(&layout, p).unwrap() + 1e-12);
    }
}

#[test]
fn polynomial_counts_match_coverage() {
    for n in 5..=8 {
        for s in Scheme::ALL {
            let layout = generate_named(s, n).unwrap();
            let poly = ReliabilityPolynomial::of(&layout).unwrap();
            for f in 0..=n {
                assert_eq!(poly.counts[n - f], coverage(&layout, f).unwrap().recovered);
            }
        }
    }
}

#[test]
fn minimal_paths_are_an_antichain() {
    for s in Scheme::ALL {
        let paths = minimal_path_sets(&generate_named(s, 6).unwrap()).unwrap();
        for a in &paths {
            for b in &paths {
                assert!(a == b || !a.is_subset(*b));
            }
        }
    }
}

#[test]
fn monte_carlo_within_three_sigma_across_seeds() {
    let layout = generate_named(Scheme::RR, 5).unwrap();
    let p = 0.7;
    let exact = exact_reliability(&layout, p).unwrap();
    let inside = (0..100u64)
        .filter(|&seed| {
            let est = monte_carlo_reliability(&layout, p, 20_000, seed).unwrap();
            (est.estimate - exact).abs() <= 3.0 * est.std_error
        })
        .count();
    assert!(inside >= 99, "{inside}/100 seeds within 3 standard errors");
}

#[test]
fn search_scores_recompute() {
    for n in [5, 6, 7] {
        for ranked in [search_pp_offsets(n).unwrap(), search_rp_offsets(n).unwrap()] {
            for c in &ranked {
                let layout = c.descriptor.build(n).unwrap();
                let degree = ft_degree(&layout).0;
                assert_eq!(degree, c.ft_degree, "{}", c.label);
                let next = coverage(&layout, degree + 1).unwrap();
                assert_eq!(
                    (next.recovered, next.total),
                    (c.next_recovered, c.next_total)
                );
            }
        }
    }
}

#[test]
fn named_parity_layouts_are_never_beaten_at_five() {
    let pp = search_pp_offsets(5).unwrap();
    let rp = search_rp_offsets(5).unwrap();
    for ranked in [&pp, &rp] {
        // Degree 4 would need one disk's three cells to span five blocks.
        assert!(ranked.iter().all(|c| c.ft_degree <= 3));
        let best = &maximizers(ranked)[0];
        assert_eq!((best.ft_degree, best.next_recovered), (3, 0));
    }
    let pp2 = pp.iter().find(|c| c.key == [0, 2, 3, 4]).unwrap();
    let rp2 = rp.iter().find(|c| c.key == [1, 1, 2]).unwrap();
    assert_eq!((pp2.ft_degree, pp2.next_recovered), (3, 0));
    assert_eq!((rp2.ft_degree, rp2.next_recovered), (3, 0));
}
