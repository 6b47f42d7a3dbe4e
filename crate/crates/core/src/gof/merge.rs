use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::policy::{MergeBasis, MergePolicy};
use crate::error::{Error, Result};
use crate::model::{PolysemySpectrum, SpectrumKind};

/// One comparison class: a set of degrees with pooled counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonClass {
    pub degrees: Vec<u32>,
    pub observed: f64,
    pub expected: f64,
}

impl ComparisonClass {
    fn min_degree(&self) -> u32 {
        self.degrees[0]
    }

    fn max_degree(&self) -> u32 {
        *self.degrees.last().unwrap()
    }

    fn absorb(&mut self, other: ComparisonClass) {
        self.degrees.extend(other.degrees);
        self.degrees.sort_unstable();
        self.observed += other.observed;
        self.expected += other.expected;
    }

    fn size(&self, basis: MergeBasis) -> f64 {
        match basis {
            MergeBasis::Expected => self.expected,
            MergeBasis::Observed => self.observed,
        }
    }
}

/// Comparison classes ordered by their lowest degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergedClasses {
    classes: Vec<ComparisonClass>,
}

impl MergedClasses {
    pub fn classes(&self) -> &[ComparisonClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn total_observed(&self) -> f64 {
        self.classes.iter().map(|c| c.observed).sum()
    }

    pub fn total_expected(&self) -> f64 {
        self.classes.iter().map(|c| c.expected).sum()
    }

    /// Runs the merge again with the current classes as units.
    pub fn remerge(&self, policy: &MergePolicy) -> Result<MergedClasses> {
        policy.validate()?;
        let units = self
            .classes
            .iter()
            .filter(|c| c.degrees.iter().all(|&k| policy.retains(k)))
            .cloned()
            .collect();
        merge_units(units, policy)
    }
}

/// Builds chi-square comparison classes.
///
/// Excluded degrees are dropped from both spectra and explicit joins are
/// applied. Units are then scanned from the highest degree down,
/// accumulating neighbours until the pooled count (expected by default)
/// reaches the minimum class size. A leftover accumulation at the low end
/// is folded into the last closed class.
pub fn merge_classes(
    observed: &PolysemySpectrum,
    expected: &PolysemySpectrum,
    policy: &MergePolicy,
) -> Result<MergedClasses> {
    policy.validate()?;
    if observed.kind() != SpectrumKind::Empirical || expected.kind() != SpectrumKind::Theoretical {
        return Err(Error::InvalidConfig(
            "merge_classes compares an empirical spectrum with a theoretical one".into(),
        ));
    }
    let degrees: BTreeSet<u32> = observed
        .counts()
        .keys()
        .chain(expected.counts().keys())
        .copied()
        .filter(|&k| policy.retains(k))
        .collect();
    let units = degrees
        .into_iter()
        .map(|k| ComparisonClass {
            degrees: vec![k],
            observed: observed.count(k),
            expected: expected.count(k),
        })
        .collect();
    merge_units(units, policy)
}

fn merge_units(units: Vec<ComparisonClass>, policy: &MergePolicy) -> Result<MergedClasses> {
    let units = apply_joins(units, &policy.explicit_joins);

    let mut closed: Vec<ComparisonClass> = Vec::new();
    let mut pending: Option<ComparisonClass> = None;
    for unit in units.into_iter().rev() {
        let acc = match pending.take() {
            Some(mut acc) => {
                acc.absorb(unit);
                acc
            }
            None => unit,
        };
        if acc.size(policy.merge_basis) >= policy.min_class_size {
            closed.push(acc);
        } else {
            pending = Some(acc);
        }
    }
    if let Some(rest) = pending {
        match closed.last_mut() {
            Some(last) => last.absorb(rest),
            None => closed.push(rest),
        }
    }
    if closed.len() < 2 {
        return Err(Error::InsufficientClasses {
            classes: closed.len(),
            dof: closed.len() as i64 - 1,
        });
    }
    closed.sort_by_key(ComparisonClass::min_degree);
    Ok(MergedClasses { classes: closed })
}

/// Pools units that share a join set; result ordered by highest degree.
fn apply_joins(units: Vec<ComparisonClass>, joins: &[BTreeSet<u32>]) -> Vec<ComparisonClass> {
    let mut pooled: BTreeMap<usize, ComparisonClass> = BTreeMap::new();
    let mut free = Vec::new();
    for unit in units {
        let join = joins.iter().position(|j| unit.degrees.iter().any(|k| j.contains(k)));
        match join {
            Some(idx) => match pooled.get_mut(&idx) {
                Some(class) => class.absorb(unit),
                None => {
                    pooled.insert(idx, unit);
                }
            },
            None => free.push(unit),
        }
    }
    free.extend(pooled.into_values());
    free.sort_by_key(ComparisonClass::max_degree);
    free
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theoretical(values: &[f64]) -> PolysemySpectrum {
        let counts = values.iter().enumerate().map(|(i, &v)| (i as u32 + 1, v)).collect();
        PolysemySpectrum::theoretical(counts, None).unwrap()
    }

    fn empirical(values: &[u64]) -> PolysemySpectrum {
        PolysemySpectrum::empirical(values.iter().enumerate().map(|(i, &v)| (i as u32 + 1, v))).unwrap()
    }

    fn degree_sets(m: &MergedClasses) -> Vec<Vec<u32>> {
        m.classes().iter().map(|c| c.degrees.clone()).collect()
    }

    #[test]
    fn tail_accumulation() {
        let e = theoretical(&[50.0, 20.0, 9.0, 6.0, 5.0]);
        let o = empirical(&[48, 22, 9, 5, 6]);
        let m = merge_classes(&o, &e, &MergePolicy::default()).unwrap();
        assert_eq!(degree_sets(&m), vec![vec![1], vec![2, 3], vec![4, 5]]);
        let expected: Vec<f64> = m.classes().iter().map(|c| c.expected).collect();
        assert_eq!(expected, vec![50.0, 29.0, 11.0]);
    }

    #[test]
    fn large_classes_untouched() {
        let e = theoretical(&[100.0, 50.0, 30.0]);
        let o = empirical(&[100, 50, 30]);
        let m = merge_classes(&o, &e, &MergePolicy::default()).unwrap();
        assert_eq!(degree_sets(&m), vec![vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn leftover_folds_into_previous_class() {
        let e = theoretical(&[4.0, 30.0, 12.0]);
        let o = empirical(&[4, 30, 12]);
        let m = merge_classes(&o, &e, &MergePolicy::default()).unwrap();
        assert_eq!(degree_sets(&m), vec![vec![1, 2], vec![3]]);
    }

    #[test]
    fn explicit_join_survives_large_classes() {
        let values = [500.0, 300.0, 200.0, 150.0, 100.0, 80.0, 60.0, 50.0, 40.0, 30.0];
        let e = theoretical(&values);
        let o = empirical(&values.map(|v| v as u64));
        let policy = MergePolicy::default().with_join([8, 9]);
        let m = merge_classes(&o, &e, &policy).unwrap();
        assert_eq!(m.len(), 9);
        assert!(degree_sets(&m).contains(&vec![8, 9]));
    }

    #[test]
    fn non_contiguous_join() {
        let e = theoretical(&[100.0, 50.0, 40.0, 30.0]);
        let o = empirical(&[100, 50, 40, 30]);
        let m = merge_classes(&o, &e, &MergePolicy::default().with_join([2, 4])).unwrap();
        assert_eq!(degree_sets(&m), vec![vec![1], vec![2, 4], vec![3]]);
    }

    #[test]
    fn exclusions_drop_degrees() {
        let e = theoretical(&[100.0, 50.0, 40.0, 30.0, 20.0]);
        let o = empirical(&[100, 50, 40, 30, 20]);
        let policy = MergePolicy::default().excluding([1]).with_exclude_above(4);
        let m = merge_classes(&o, &e, &policy).unwrap();
        assert_eq!(degree_sets(&m), vec![vec![2], vec![3], vec![4]]);
        assert_eq!(m.total_observed(), 120.0);
    }

    #[test]
    fn observed_basis() {
        let e = theoretical(&[50.0, 20.0, 12.0]);
        let o = empirical(&[50, 20, 3]);
        let by_expected = merge_classes(&o, &e, &MergePolicy::default()).unwrap();
        let by_observed =
            merge_classes(&o, &e, &MergePolicy::default().with_basis(MergeBasis::Observed)).unwrap();
        assert_eq!(by_expected.len(), 3);
        assert_eq!(degree_sets(&by_observed), vec![vec![1], vec![2, 3]]);
    }

    #[test]
    fn missing_degrees_count_as_zero() {
        let e = theoretical(&[60.0, 30.0, 10.0]);
        let o = PolysemySpectrum::empirical([(1, 60), (3, 12), (7, 1)]).unwrap();
        let m = merge_classes(&o, &e, &MergePolicy::default()).unwrap();
        assert_eq!(degree_sets(&m), vec![vec![1], vec![2], vec![3, 7]]);
        assert_eq!(m.classes()[1].observed, 0.0);
        assert_eq!(m.classes()[2].observed, 13.0);
    }

    #[test]
    fn too_few_classes() {
        let e = theoretical(&[5.0, 3.0]);
        let o = empirical(&[5, 3]);
        let err = merge_classes(&o, &e, &MergePolicy::default()).unwrap_err();
        assert!(matches!(err, Error::InsufficientClasses { classes: 1, .. }));

        let e = theoretical(&[50.0, 30.0, 20.0]);
        let o = empirical(&[50, 30, 20]);
        let policy = MergePolicy::default().excluding([2, 3]);
        assert!(matches!(
            merge_classes(&o, &e, &policy),
            Err(Error::InsufficientClasses { classes: 1, .. })
        ));
    }

    #[test]
    fn kinds_are_checked() {
        let e = theoretical(&[50.0, 30.0]);
        let o = empirical(&[50, 30]);
        assert!(matches!(merge_classes(&e, &o, &MergePolicy::default()), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn remerge_is_identity() {
        let e = theoretical(&[50.0, 20.0, 9.0, 6.0, 5.0, 0.5]);
        let o = empirical(&[48, 22, 9, 5, 6, 1]);
        let policy = MergePolicy::default().with_join([2, 3]);
        let m = merge_classes(&o, &e, &policy).unwrap();
        assert_eq!(m.remerge(&policy).unwrap(), m);
    }
}
