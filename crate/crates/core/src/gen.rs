//! Deterministic instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{normalize_instance, Instance, ModelError};
use crate::scalar::Scalar;

/// Parameters for [`gen_random`]. All coordinates are integers.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    /// Left endpoints of free intervals are drawn from `0..=coord_max`.
    pub coord_max: i64,
    pub len_min: i64,
    pub len_max: i64,
    /// Probability that an interval is drawn inside an earlier one.
    pub containment_bias: f64,
    pub seed: u64,
}

impl GenSpec {
    /// Coordinates in `[0, 4n]`, lengths in `[1, n]`, nesting probability 0.3.
    pub fn new(n: usize, seed: u64) -> GenSpec {
        let n_i = i64::try_from(n.max(1)).expect("n fits in i64");
        GenSpec {
            n,
            coord_max: 4 * n_i,
            len_min: 1,
            len_max: n_i,
            containment_bias: 0.3,
            seed,
        }
    }

    /// Same-length intervals with no forced nesting.
    pub fn equal_length(n: usize, len: i64, seed: u64) -> GenSpec {
        GenSpec {
            len_min: len,
            len_max: len,
            containment_bias: 0.0,
            ..GenSpec::new(n, seed)
        }
    }
}

/// Raw `(left, right)` pairs in generation order.
pub fn gen_pairs(spec: &GenSpec) -> Vec<(i64, i64)> {
    assert!(
        spec.len_min >= 1 && spec.len_min <= spec.len_max,
        "invalid length bounds"
    );
    assert!(spec.coord_max >= 0, "invalid coordinate bound");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out: Vec<(i64, i64)> = Vec::with_capacity(spec.n);
    let mut nested = false;
    for k in 0..spec.n {
        let force = spec.containment_bias > 0.0 && !nested && k + 1 == spec.n && k > 0;
        if k > 0 && (force || rng.gen_bool(spec.containment_bias.clamp(0.0, 1.0))) {
            let (l, r) = out[rng.gen_range(0..k)];
            let a = rng.gen_range(l..r);
            let b = rng.gen_range(a + 1..=r);
            out.push((a, b));
            nested = true;
        } else {
            let l = rng.gen_range(0..=spec.coord_max);
            let len = rng.gen_range(spec.len_min..=spec.len_max);
            out.push((l, l + len));
        }
    }
    out
}

pub fn gen_random(spec: &GenSpec) -> Instance {
    Instance::from_pairs(gen_pairs(spec)).expect("generator produces valid intervals")
}

/// One long interval holding `n - 1` disjoint unit intervals. Every step
/// forks a new candidate list, so the quadratic solver ends up with `n` lists.
pub fn gen_comb(n: usize) -> Instance {
    assert!(n >= 1, "comb needs at least one interval");
    let n = i64::try_from(n).expect("n fits in i64");
    let outer = (0, 2 * n + 1);
    Instance::from_pairs(std::iter::once(outer).chain((1..n).map(|k| (2 * k - 1, 2 * k))))
        .expect("comb intervals are valid")
}

/// One unit-length interval centred at `10 * a` per value; the intervals are
/// pairwise disjoint exactly when the values are distinct.
pub fn gen_distinctness(values: &[i64]) -> Result<Instance, ModelError> {
    let half = Scalar::ratio(1, 2);
    let raw: Vec<(Scalar, Scalar)> = values
        .iter()
        .map(|&a| {
            let c = Scalar::from(10 * i128::from(a));
            (&c - &half, &c + &half)
        })
        .collect();
    normalize_instance(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force;

    #[test]
    fn deterministic() {
        let s = GenSpec::new(8, 7);
        assert_eq!(gen_pairs(&s), gen_pairs(&s));
        assert_ne!(gen_pairs(&s), gen_pairs(&GenSpec::new(8, 8)));
        assert_eq!(gen_random(&GenSpec::new(1, 3)).len(), 1);
    }

    #[test]
    fn nesting_appears() {
        for seed in 0..50 {
            let inst = gen_random(&GenSpec::new(5, seed));
            let ivs = inst.intervals();
            let nested =
                (0..ivs.len()).any(|a| (0..ivs.len()).any(|b| a != b && ivs[a].contains(&ivs[b])));
            assert!(nested, "seed {seed}");
        }
    }

    #[test]
    fn comb_keeps_every_list() {
        let inst = gen_comb(40);
        let run = crate::prelim::run_preliminary(&inst);
        assert_eq!(run.lists().len(), 40);
        assert_eq!(
            brute_force(&gen_comb(6)).unwrap().delta,
            crate::fast::solve_fast(&gen_comb(6)).delta
        );
    }

    #[test]
    fn equal_length_spec() {
        assert!(gen_random(&GenSpec::equal_length(30, 4, 1)).all_equal_length());
    }

    #[test]
    fn distinctness_examples() {
        assert_eq!(
            brute_force(&gen_distinctness(&[1, 2, 3]).unwrap())
                .unwrap()
                .delta,
            Scalar::from(0)
        );
        assert_eq!(
            brute_force(&gen_distinctness(&[3, 5, 3]).unwrap())
                .unwrap()
                .delta,
            Scalar::from(1)
        );
        assert_eq!(
            brute_force(&gen_distinctness(&[7]).unwrap()).unwrap().delta,
            Scalar::from(0)
        );
        let i = gen_distinctness(&[2]).unwrap();
        assert_eq!(i[0].left(), &Scalar::ratio(39, 2));
        assert!(gen_distinctness(&[]).is_err());
    }
}
