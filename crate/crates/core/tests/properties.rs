mod oracle;

use cf_lab_core::cf::{
    alternate_rep, continuant, continuant_trace, convergent, expand, is_avg_bounded,
};
use cf_lab_core::density::{density_report, f_set, find_witness, u_set};
use cf_lab_core::enumeration::{count_by_continuant, exponent_table, merge_tables, exponent_table_shard, Constraint};
use cf_lab_core::shifting::{classify, normalize, shift_step, ShiftCase};
use cf_lab_core::{BoundParameter, Natural, PartialQuotientSeq, ReducedFraction, Shard};
use num_bigint::BigUint;
use proptest::prelude::*;

fn b(v: u64) -> BoundParameter {
    BoundParameter::new(v).unwrap()
}

fn coprime_pair() -> impl Strategy<Value = (u64, u64)> {
    (2u64..1_000_000_000_000)
        .prop_flat_map(|n| (1..n, Just(n)))
        .prop_filter("coprime", |&(k, n)| oracle::gcd(k, n) == 1)
}

/// Sequences bounded in average by `bound`, built term by term from slack.
fn avg_bounded(bound: u64, max_len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0.0f64..1.0, 1..=max_len).prop_map(move |draws| {
        let mut sum = 0;
        draws
            .iter()
            .enumerate()
            .map(|(i, u)| {
                let top = bound * (i as u64 + 1) - sum;
                let a = 1 + ((top as f64 * u) as u64).min(top - 1);
                sum += a;
                a
            })
            .collect()
    })
}

/// A move from position `t` to `t - 1` changes `q_t` by
/// `q_{t-2} (a_t - a_{t-1} - 1) - q_{t-3}` and raises `q_{t-1}`, so the
/// continuant can stay put only when `t` is the last position and that
/// change is zero, e.g. `(1, 1, 3) -> (1, 2, 2)`, both with continuant 7.
fn case_one_can_tie(a: &[u64], t: usize) -> bool {
    let q = |j: usize| oracle::denominator(&a[..j]);
    let q_before = |j: isize| if j < 0 { 0 } else { q(j as usize) };
    let t_i = t as isize;
    t == a.len()
        && q_before(t_i - 2) * u128::from(a[t - 1] - a[t - 2] - 1) == q_before(t_i - 3)
}

proptest! {
    #[test]
    fn round_trip_large((k, n) in coprime_pair()) {
        let f = ReducedFraction::new(k, n).unwrap();
        let s = expand(&f).unwrap();
        prop_assert_eq!(s.terms().to_vec(), oracle::euclid(k, n));
        prop_assert_eq!(convergent::<u64>(&s).unwrap(), f.clone());
        let alt = alternate_rep(&s).unwrap();
        prop_assert_eq!(convergent::<u64>(&alt).unwrap(), f);
        prop_assert_eq!(continuant::<Natural>(&s).unwrap(), BigUint::from(n));
    }

    #[test]
    fn big_scalar_agrees(terms in prop::collection::vec(1u64..1_000_000, 1..40)) {
        let s = PartialQuotientSeq::new(terms.clone()).unwrap();
        prop_assert_eq!(continuant::<Natural>(&s).unwrap(), oracle::denominator_big(&terms));
        let trace = continuant_trace::<Natural>(&s).unwrap();
        prop_assert!(trace.values().windows(2).all(|w| w[0] <= w[1]));
        if s.len() >= 2 {
            prop_assert!(trace.values()[1..].windows(2).skip(1).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn appending_never_lowers(terms in prop::collection::vec(1u64..50, 1..20), x in 1u64..50) {
        let s = PartialQuotientSeq::new(terms).unwrap();
        let longer = s.append(x).unwrap();
        prop_assert!(continuant::<Natural>(&longer).unwrap() >= continuant::<Natural>(&s).unwrap());
    }

    #[test]
    fn shifting_preserves_and_grows(
        (bound, terms) in (2u64..6).prop_flat_map(|bd| (Just(bd), avg_bounded(bd, 30)))
    ) {
        let s = PartialQuotientSeq::new(terms).unwrap();
        prop_assert!(is_avg_bounded(&s, b(bound)));
        let (end, steps) = normalize(&s, b(bound)).unwrap();
        prop_assert!(steps.len() as u128 <= s.weighted_sum());
        prop_assert!(end.terms().iter().all(|&a| a <= bound));
        for step in &steps {
            prop_assert!(step.continuant_after >= step.continuant_before);
            if let ShiftCase::CaseI { t } = step.case {
                prop_assert!(
                    step.continuant_after > step.continuant_before || case_one_can_tie(step.before.terms(), t)
                );
            }
            prop_assert!(is_avg_bounded(&step.after, b(bound)));
            prop_assert_eq!(step.after.sum(), step.before.sum());
            prop_assert_eq!(shift_step(&step.before, b(bound)).unwrap(), step.clone());
        }
        if let Some(last) = steps.last() {
            prop_assert_eq!(classify(&last.after, b(bound)).unwrap(), ShiftCase::Fixpoint);
        }
    }

    #[test]
    fn witnesses_revalidate(n in 2u64..100_000, bound in 2u64..6) {
        if let Some(w) = find_witness(&n, b(bound)).unwrap() {
            prop_assert!(w.revalidate(b(bound)));
            let expected = oracle::first_witness(n, bound).unwrap();
            prop_assert_eq!(w.k, expected.0);
        } else {
            prop_assert!(oracle::first_witness(n, bound).is_none());
        }
    }
}

#[test]
fn only_two_representations() {
    // every sequence with value k/n has length at most that of the alternate
    for n in 2..=60u64 {
        let mut found = std::collections::BTreeMap::<(u128, u128), Vec<Vec<u64>>>::new();
        oracle::sequences_up_to(n, &|_| true, &mut |s| {
            let (p, q) = oracle::value(s);
            if q == n as u128 {
                found.entry((p, q)).or_default().push(s.to_vec());
            }
        });
        for ((p, _), seqs) in found {
            let f = ReducedFraction::new(p as u64, n).unwrap();
            let canon = expand(&f).unwrap();
            let alt = alternate_rep(&canon).unwrap();
            let mut expected = vec![canon.into_terms(), alt.into_terms()];
            expected.sort();
            let mut seqs = seqs;
            seqs.sort();
            assert_eq!(seqs, expected, "{p}/{n}");
        }
    }
}

#[test]
fn pruned_counts_match_naive_enumeration() {
    for n in (1..=80u64).chain([150, 300, 500]) {
        for bound in [2u64, 3] {
            let avg = count_by_continuant(&n, b(bound), Constraint::Average, Shard::whole()).unwrap();
            let uni = count_by_continuant(&n, b(bound), Constraint::Uniform, Shard::whole()).unwrap();
            assert_eq!(avg, BigUint::from(oracle::count_avg(n, bound)), "avg n={n} B={bound}");
            assert_eq!(uni, BigUint::from(oracle::count_uniform(n, bound)), "uniform n={n} B={bound}");
        }
    }
}

#[test]
fn counts_are_monotone() {
    let grid: Vec<u64> = (1..=40).map(|i| i * 25).collect();
    for bound in 2..=4 {
        let table = exponent_table(&grid, b(bound)).unwrap();
        for w in table.windows(2) {
            assert!(w[0].avg_count <= w[1].avg_count);
            assert!(w[0].uniform_count <= w[1].uniform_count);
        }
        for r in &table {
            assert!(r.avg_count >= r.uniform_count);
        }
    }
}

#[test]
fn sharded_counts_sum_to_whole() {
    let grid = [7u64, 1000, 20_000];
    let whole = exponent_table(&grid, b(2)).unwrap();
    for shards in [2, 3, 8] {
        let parts: Vec<_> = Shard::all(shards)
            .unwrap()
            .into_iter()
            .map(|s| exponent_table_shard(&grid, b(2), s).unwrap())
            .collect();
        assert_eq!(merge_tables(&parts).unwrap(), whole);
    }
}

#[test]
fn density_monotone_in_n_and_bound() {
    let mut last = 0;
    for n_max in [2u64, 10, 50, 200, 600] {
        let counts: Vec<u64> = (2..=5).map(|bd| density_report(n_max, b(bd)).unwrap().count).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "N={n_max}: {counts:?}");
        assert!(counts[0] >= last);
        last = counts[0];
    }
    assert_eq!(f_set(600, b(5)).unwrap().len(), 599);
}

#[test]
fn u_set_matches_fraction_scan() {
    for n in [3u64, 7, 30, 120] {
        let entries = u_set(n).unwrap();
        let mut expected = Vec::new();
        for q in 3..=n {
            for p in (2..q).filter(|&p| oracle::gcd(p, q) == 1) {
                let canon = oracle::euclid(p, q);
                let ok = |a: &[u64]| a.len() >= 2 && oracle::avg_ok(a, 2) && oracle::avg_ok(&a[1..], 2);
                if ok(&canon) || oracle::other_rep(&canon).is_some_and(|alt| ok(&alt)) {
                    expected.push((p, q));
                }
            }
        }
        let got: Vec<(u64, u64)> = entries
            .iter()
            .map(|e| (*e.fraction.numerator(), *e.fraction.denominator()))
            .collect();
        assert_eq!(got, expected, "n={n}");
        for e in &entries {
            assert_eq!(e.tail.terms(), &e.sequence.terms()[1..]);
            assert_eq!(convergent::<u64>(&e.sequence).unwrap(), e.fraction);
        }
    }
}
