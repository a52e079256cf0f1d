use num_bigint::BigInt;
use proptest::prelude::*;

use symdyn::entrolab::blocks::{block_entropy, block_frequencies};
use symdyn::entrolab::cover_entropy::min_subcover_count;
use symdyn::entrolab::markov::MarkovMeasure;
use symdyn::entrolab::partition_entropy::partition_entropy_under_markov;
use symdyn::entrolab::spectral::sft_entropy;
use symdyn::exact::{parse_rational, rat, Rational};
use symdyn::recfam::nset::hits;
use symdyn::recfam::window::meets_every_run;
use symdyn::recfam::{ip_set, n_set, poincare_return_masses, sip_set, weyl_average, IntegerWindowSet, QuadraticReal, SequenceSpec};
use symdyn::towers::kr::decompose;
use symdyn::towers::tower::return_times;
use symdyn::towers::uniformity::UniformityMode;
use symdyn::towers::uniformity_defect;
use symdyn::varprin::{attain_cover_entropy, universal_rohlin, GoodPointOptions};
use symdyn::{Caps, CoverSpec, CylinderUnion, PartitionSpec, Subshift, Word};

/// A 1-step SFT on 2 or 3 symbols from a forbidden-pair mask.
fn sft(ell: usize, mask: u16) -> Option<Subshift> {
    let mut forbidden = Vec::new();
    for a in 0..ell as u8 {
        for b in 0..ell as u8 {
            if mask >> (a as usize * ell + b as usize) & 1 == 1 {
                forbidden.push(Word(vec![a, b]));
            }
        }
    }
    Subshift::sft(ell, forbidden).ok()
}

fn any_sft() -> impl Strategy<Value = (usize, u16)> {
    (2usize..=3, any::<u16>())
}

/// Words of length `n` in the 0/1 transition matrix after pruning symbols
/// without a predecessor or successor.
fn adjacency_count(x: &Subshift, n: usize) -> u128 {
    let ell = x.ell();
    let edge = |a: usize, b: usize| x.is_admissible(&[a as u8, b as u8]).unwrap();
    let mut live = vec![true; ell];
    loop {
        let next: Vec<bool> = (0..ell)
            .map(|a| live[a] && (0..ell).any(|b| live[b] && edge(a, b)) && (0..ell).any(|b| live[b] && edge(b, a)))
            .collect();
        if next == live {
            break;
        }
        live = next;
    }
    let mut v: Vec<u128> = live.iter().map(|&l| l as u128).collect();
    for _ in 1..n {
        v = (0..ell)
            .map(|a| if live[a] { (0..ell).filter(|&b| live[b] && edge(a, b)).map(|b| v[b]).sum() } else { 0 })
            .collect();
    }
    v.iter().sum()
}

fn golden_chain(p: i64, q: i64) -> MarkovMeasure {
    let x = Subshift::golden_mean();
    MarkovMeasure::on_graph(&x, &[vec![rat(p, q), rat(q - p, q)], vec![rat(1, 1)]], "chain").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn language_is_factorial((ell, mask) in any_sft(), n in 1usize..7) {
        let Some(x) = sft(ell, mask) else { return Ok(()) };
        let short = x.language(n).unwrap();
        for w in x.language(n + 1).unwrap() {
            prop_assert!(short.binary_search(&Word(w.0[..n].to_vec())).is_ok());
            prop_assert!(short.binary_search(&Word(w.0[1..].to_vec())).is_ok());
        }
    }

    #[test]
    fn sft_word_counts_match_matrix_powers((ell, mask) in any_sft(), n in 1usize..=12) {
        let Some(x) = sft(ell, mask) else { return Ok(()) };
        prop_assert_eq!(x.count_words(n).unwrap(), adjacency_count(&x, n));
    }

    #[test]
    fn canonical_reduction_keeps_membership(
        words in proptest::collection::btree_set(proptest::collection::vec(0u8..2, 3), 0..8),
        lo in -3i64..3,
        block in proptest::collection::vec(0u8..2, 10),
    ) {
        let list: Vec<Vec<u8>> = words.iter().cloned().collect();
        let u = CylinderUnion::from_words(2, lo, 3, list);
        let block_lo = -5;
        let off = (lo - block_lo) as usize;
        let direct = words.contains(&block[off..off + 3].to_vec());
        prop_assert_eq!(u.contains_block(&block, block_lo), direct);
    }

    #[test]
    fn block_entropy_bounds(w in proptest::collection::vec(0u8..2, 1..15), k in 1usize..4) {
        prop_assume!(k <= w.len());
        let h = block_entropy(&w, k).unwrap();
        prop_assert!(h >= 0.0 && h <= k as f64 * 2f64.ln() + 1e-12);
        prop_assert_eq!(block_frequencies(&w, k).unwrap().total(), rat(1, 1));
    }

    #[test]
    fn subcover_counts_are_subadditive_and_monotone((ell, mask) in any_sft(), m in 1usize..5, n in 1usize..5) {
        let Some(x) = sft(ell, mask) else { return Ok(()) };
        let v = CoverSpec::generating(&x).unwrap();
        let r = |n| (min_subcover_count(&x, &v, n).unwrap() as f64).ln();
        prop_assert!(r(m + n) <= r(m) + r(n) + 1e-12);
        // {X \ [0], X \ [1], ...} is refined by the symbol partition
        let coarse: Vec<_> = (0..ell as u8)
            .map(|a| CylinderUnion::cylinder(ell, 0, &[a]).complement(x.caps()).unwrap())
            .collect();
        let Ok(u) = CoverSpec::new(&x, coarse) else { return Ok(()) };
        prop_assert!(min_subcover_count(&x, &v, n).unwrap() >= min_subcover_count(&x, &u, n).unwrap());
    }

    #[test]
    fn markov_entropy_below_topological(p in 1i64..10) {
        let x = Subshift::golden_mean();
        let mu = golden_chain(p, 10);
        let alpha = PartitionSpec::generating(&x).unwrap();
        let e = partition_entropy_under_markov(&x, &alpha, &mu, 6).unwrap();
        prop_assert!(e.estimate <= sft_entropy(&x).unwrap() + 1e-9);
        prop_assert!(e.monotone);
    }

    #[test]
    fn return_masses_sum_exactly(p in 1i64..7, word in proptest::collection::vec(0u8..2, 1..4)) {
        let x = Subshift::golden_mean();
        let mu = golden_chain(p, 7);
        prop_assume!(x.is_admissible(&word).unwrap());
        let b = CylinderUnion::cylinder(2, 0, &word);
        let r = return_times(&x, &b, &mu, 12).unwrap();
        prop_assert_eq!(r.sums_exactly, Some(true));
        let total: Rational = r.exact_masses.unwrap().iter().map(|(_, m)| parse_rational(m).unwrap()).sum::<Rational>()
            + parse_rational(&r.exact_residual.unwrap()).unwrap();
        prop_assert_eq!(total, mu.measure::<Rational>(&word).unwrap());
    }

    #[test]
    fn two_height_decomposition(l in 1usize..2000, n in 1usize..12) {
        match decompose(l, n) {
            Some((u, v)) => prop_assert_eq!(n * u + (n + 1) * v, l),
            None => prop_assert!(l < n * n - 1 || n == 1 && l == 0),
        }
    }

    #[test]
    fn weyl_at_zero_is_one(n in 1usize..400, step in 1i64..9) {
        let z = QuadraticReal::parse("0").unwrap();
        for s in [SequenceSpec::Squares, SequenceSpec::Arithmetic { start: 0, step }] {
            let w = weyl_average(&s, &z, n, &Caps::default()).unwrap();
            prop_assert_eq!(w.magnitude, 1.0);
        }
    }

    #[test]
    fn exact_floors(a in -50i64..50, b in 1i64..50, d in 2u64..30, n in -1000i64..1000) {
        let x = QuadraticReal::new(rat(a, 7), rat(b, 3), d).unwrap();
        let y = x.mul_int(&BigInt::from(n));
        let f = y.floor();
        // floor(y) <= y < floor(y) + 1, decided exactly
        let lo = y.sub_rational(&Rational::from_integer(f.clone()));
        let hi = y.sub_rational(&Rational::from_integer(f + 1));
        prop_assert_ne!(lo.signum(), std::cmp::Ordering::Less);
        prop_assert_eq!(hi.signum(), std::cmp::Ordering::Less);
    }

    #[test]
    fn window_set_negation_round_trip(members in proptest::collection::btree_set(-20i64..20, 0..15)) {
        let s = IntegerWindowSet::explicit(-20, 20, members.iter().copied()).unwrap();
        prop_assert_eq!(s.negated().negated().members(), s.members());
        prop_assert_eq!(s.negated().members(), members.iter().rev().map(|m| -m).collect::<Vec<_>>());
    }

    #[test]
    fn syndetic_sets_meet_every_long_run(members in proptest::collection::btree_set(0i64..60, 1..30)) {
        let s = IntegerWindowSet::explicit(0, 59, members.iter().copied()).unwrap();
        if let Some(g) = s.max_gap() {
            // runs fully inside [first, last]
            let (first, last) = (*members.first().unwrap(), *members.last().unwrap());
            let inner = s.restrict(first, last);
            prop_assert!(meets_every_run(&inner, g as usize));
        }
    }

    #[test]
    fn ip_inside_sip(gens in proptest::collection::vec(1i64..20, 1..5)) {
        let caps = Caps::default();
        let ip = ip_set(&gens, &caps).unwrap();
        let sip = sip_set(&gens, &caps).unwrap();
        for m in ip.members() {
            if m >= sip.lo && m <= sip.hi {
                prop_assert!(sip.contains(m), "{m}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn return_sets_are_symmetric((ell, mask) in any_sft(), word in proptest::collection::vec(0u8..3, 1..3)) {
        let Some(x) = sft(ell, mask) else { return Ok(()) };
        prop_assume!(word.iter().all(|&s| (s as usize) < ell));
        let u = CylinderUnion::cylinder(ell, 0, &word);
        let Ok(s) = n_set(&x, &u, &u, 12) else { return Ok(()) };
        prop_assert_eq!(s.negated().members(), s.members());
    }

    #[test]
    fn translation_law(a in 0u8..2, b in 0u8..2, h in 4i64..10) {
        let x = Subshift::golden_mean();
        let caps = *x.caps();
        let u = CylinderUnion::cylinder(2, 0, &[a]);
        let v = CylinderUnion::cylinder(2, 0, &[b]);
        let nuv = n_set(&x, &u, &v, 2 * h).unwrap();
        for k in nuv.restrict(-6, 6).members() {
            let u0 = u.intersection(&v.shifted(k), &caps).unwrap();
            let n00 = n_set(&x, &u0, &u0, h).unwrap();
            for m in n00.members() {
                if (k + m).abs() <= 2 * h {
                    prop_assert!(nuv.contains(k + m), "k={k} m={m}");
                }
                prop_assert!(hits(&x, &u, &v, k + m).unwrap());
            }
        }
    }

    #[test]
    fn poincare_positivity(p in 1i64..10, word in proptest::collection::vec(0u8..2, 1..4)) {
        let x = Subshift::golden_mean();
        prop_assume!(x.is_admissible(&word).unwrap());
        let mu = golden_chain(p, 10);
        let b = CylinderUnion::cylinder(2, 0, &word);
        let r = poincare_return_masses(&mu, &b, &SequenceSpec::Squares, 20, 1 << 20).unwrap();
        prop_assert!(r.mixing);
        prop_assert!(r.first_positive.is_some());
    }

    #[test]
    fn rohlin_levels_disjoint_for_every_measure(n in 2usize..5, dq in 2i64..4, p in 1i64..4) {
        let x = Subshift::full(2).unwrap();
        let fam = vec![
            MarkovMeasure::uniform_bernoulli(2),
            MarkovMeasure::bernoulli(&[rat(p, 4), rat(4 - p, 4)]).unwrap(),
        ];
        let r = universal_rohlin(&x, n, &rat(1, dq), &fam, None).unwrap();
        prop_assert!(r.disjoint);
        prop_assert!(r.coverages.iter().all(|c| c.holds));
    }

    #[test]
    fn sampled_uniformity_below_exhaustive(seed in any::<u64>(), walks in 1u64..6) {
        let x = Subshift::golden_mean();
        let mu = MarkovMeasure::parry(&x).unwrap();
        let p = PartitionSpec::generating(&x).unwrap();
        let ns = [4, 8];
        let ex = uniformity_defect(&x, &p, &mu, &ns, 1, UniformityMode::Exhaustive).unwrap();
        let sa = uniformity_defect(&x, &p, &mu, &ns, 1, UniformityMode::Sampled { walks, seed }).unwrap();
        for (a, b) in sa.rows.iter().zip(&ex.rows) {
            prop_assert!(a.deviation <= b.deviation + 1e-12);
        }
    }
}

#[test]
fn attain_is_deterministic() {
    let x = Subshift::golden_mean();
    let u = CoverSpec::generating(&x).unwrap();
    let run = || format!("{:?}", attain_cover_entropy(&x, &u, &[(1, 64), (2, 256)], &GoodPointOptions::default(), 0.05).unwrap());
    assert_eq!(run(), run());
}
