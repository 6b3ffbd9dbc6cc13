//! Merge operators applied by masters when reconciling replica updates.
//! Each must be associative and commutative on its value domain.

use crate::graph::VertexId;

pub trait Aggregator<V>: Sync {
    fn merge(&self, a: &V, b: &V) -> V;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Min;

impl Aggregator<VertexId> for Min {
    fn merge(&self, a: &VertexId, b: &VertexId) -> VertexId {
        *a.min(b)
    }
}

impl Aggregator<f64> for Min {
    fn merge(&self, a: &f64, b: &f64) -> f64 {
        if b < a {
            *b
        } else {
            *a
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Sum;

impl Aggregator<f64> for Sum {
    fn merge(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
}

/// Element-wise sum of dense counter vectors; the shorter operand is padded
/// with zeros.
#[derive(Debug, Clone, Copy, Default)]
pub struct MapSum;

impl Aggregator<Vec<i64>> for MapSum {
    fn merge(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut out = long.clone();
        for (o, x) in out.iter_mut().zip(short) {
            *o += x;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn min_u64_laws(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
            prop_assert_eq!(Min.merge(&a, &Min.merge(&b, &c)), Min.merge(&Min.merge(&a, &b), &c));
            prop_assert_eq!(Min.merge(&a, &b), Min.merge(&b, &a));
        }

        #[test]
        fn min_f64_laws(a in 0.0f64..1e6, b in 0.0f64..1e6, c in 0.0f64..1e6) {
            let m: &dyn Aggregator<f64> = &Min;
            prop_assert_eq!(m.merge(&a, &m.merge(&b, &c)), m.merge(&m.merge(&a, &b), &c));
            prop_assert_eq!(m.merge(&a, &b), m.merge(&b, &a));
        }

        #[test]
        fn sum_laws(a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..1.0) {
            let l = Sum.merge(&a, &Sum.merge(&b, &c));
            let r = Sum.merge(&Sum.merge(&a, &b), &c);
            prop_assert!((l - r).abs() <= 1e-12 * l.abs().max(1e-300));
            prop_assert_eq!(Sum.merge(&a, &b), Sum.merge(&b, &a));
        }

        #[test]
        fn map_sum_laws(
            a in prop::collection::vec(-50i64..50, 0..6),
            b in prop::collection::vec(-50i64..50, 0..6),
            c in prop::collection::vec(-50i64..50, 0..6),
        ) {
            prop_assert_eq!(MapSum.merge(&a, &MapSum.merge(&b, &c)), MapSum.merge(&MapSum.merge(&a, &b), &c));
            prop_assert_eq!(MapSum.merge(&a, &b), MapSum.merge(&b, &a));
        }
    }
}
