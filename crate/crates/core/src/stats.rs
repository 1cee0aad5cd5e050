//! Proof-family bookkeeping: per-instance measurements, the minimal proof
//! size function, and log-log growth fits.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::Float;
use thiserror::Error;

use crate::compression::Mode;
use crate::formula::Formula;
use crate::ndproof::{enumerate_proofs, MAX_ENUMERATION_SIZE};

/// Curvature of the quadratic log-log fit above which growth is flagged.
pub const CONVEXITY_THRESHOLD: f64 = 0.05;
pub const MAX_FMIN_ATOMS: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub tree_height: usize,
    pub tree_size: usize,
    pub dag_nodes: usize,
    pub dag_edges: usize,
    pub checker_steps: u64,
    pub mode: Mode,
    pub accepted: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProofFamily {
    pub name: String,
    rows: Vec<FamilyRow>,
    skipped: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("row for instance {0} in mode {1} already present")]
    DuplicateRow(String, Mode),
    #[error("conclusion size must be at least 1")]
    EmptyConclusion,
    #[error("family has no instances")]
    EmptyFamily,
    #[error("at most {MAX_FMIN_ATOMS} atoms are supported, got {0}")]
    TooManyAtoms(usize),
    #[error("size bound {0} exceeds {MAX_ENUMERATION_SIZE}")]
    SizeBound(usize),
}

impl ProofFamily {
    pub fn new(name: impl Into<String>) -> ProofFamily {
        ProofFamily {
            name: name.into(),
            ..ProofFamily::default()
        }
    }

    pub fn add_row(&mut self, row: FamilyRow) -> Result<(), StatsError> {
        if row.m == 0 {
            return Err(StatsError::EmptyConclusion);
        }
        if self
            .rows
            .iter()
            .any(|r| r.instance == row.instance && r.mode == row.mode)
        {
            return Err(StatsError::DuplicateRow(row.instance, row.mode));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Records an instance that produced no proof (a hamiltonian graph).
    pub fn add_skipped(&mut self, instance: impl Into<String>) {
        self.skipped.push(instance.into());
    }

    pub fn rows(&self) -> &[FamilyRow] {
        &self.rows
    }

    pub fn skipped(&self) -> &[String] {
        &self.skipped
    }

    /// Absorbs another family's rows, e.g. from a parallel worker.
    pub fn merge(&mut self, other: ProofFamily) -> Result<(), StatsError> {
        for r in other.rows {
            self.add_row(r)?;
        }
        self.skipped.extend(other.skipped);
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthVerdict {
    PolynomialFit,
    SuperpolynomialSuspect,
}

impl GrowthVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            GrowthVerdict::PolynomialFit => "polynomial-fit",
            GrowthVerdict::SuperpolynomialSuspect => "superpolynomial-suspect",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthFit<T> {
    pub slope: T,
    pub intercept: T,
    pub degree: u32,
    /// Root mean square residual of the linear log-log fit.
    pub residual: T,
    /// Leading coefficient of a quadratic fit in log-log space.
    pub curvature: T,
    pub verdict: GrowthVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FitError {
    #[error("need at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("sizes must be strictly increasing")]
    NotIncreasing,
    #[error("sizes and values must be positive")]
    NonPositive,
}

/// Least-squares fit of `log(value)` against `log(m)`.
pub fn growth_fit<T: Float>(series: &[(T, T)]) -> Result<GrowthFit<T>, FitError> {
    if series.len() < 4 {
        return Err(FitError::TooFewPoints(series.len()));
    }
    if series.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(FitError::NotIncreasing);
    }
    if series
        .iter()
        .any(|&(m, v)| m <= T::zero() || v <= T::zero())
    {
        return Err(FitError::NonPositive);
    }
    let xs: Vec<T> = series.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<T> = series.iter().map(|p| p.1.ln()).collect();
    let count = T::from(xs.len()).expect("length fits in a float");
    let mean = xs.iter().fold(T::zero(), |a, &x| a + x) / count;
    let cx: Vec<T> = xs.iter().map(|&x| x - mean).collect();

    let line = least_squares(&cx, &ys, 2);
    let quad = least_squares(&cx, &ys, 3);
    let slope = line[1];
    let intercept = line[0] - slope * mean;
    let sq = cx
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| {
            let r = y - (line[0] + line[1] * x);
            r * r
        })
        .fold(T::zero(), |a, b| a + b);
    let residual = (sq / count).sqrt();
    let curvature = quad[2];
    let threshold = T::from(CONVEXITY_THRESHOLD).expect("threshold fits");
    let verdict = if curvature > threshold {
        GrowthVerdict::SuperpolynomialSuspect
    } else {
        GrowthVerdict::PolynomialFit
    };
    Ok(GrowthFit {
        slope,
        intercept,
        degree: slope.round().max(T::zero()).to_u32().unwrap_or(u32::MAX),
        residual,
        curvature,
        verdict,
    })
}

/// Polynomial least squares of the given number of coefficients via the
/// normal equations, lowest degree first.
fn least_squares<T: Float>(xs: &[T], ys: &[T], k: usize) -> Vec<T> {
    let mut a = vec![vec![T::zero(); k + 1]; k];
    for (&x, &y) in xs.iter().zip(ys) {
        let mut pow = vec![T::one(); 2 * k];
        for i in 1..2 * k {
            pow[i] = pow[i - 1] * x;
        }
        for r in 0..k {
            for c in 0..k {
                a[r][c] = a[r][c] + pow[r + c];
            }
            a[r][k] = a[r][k] + pow[r] * y;
        }
    }
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| {
                a[i][col]
                    .abs()
                    .partial_cmp(&a[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        a.swap(col, pivot);
        let p = a[col][col];
        if p == T::zero() {
            continue;
        }
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col {
                let factor = row[col] / p;
                for (x, &y) in row[col..=k].iter_mut().zip(&pivot[col..=k]) {
                    *x = *x - factor * y;
                }
            }
        }
    }
    (0..k)
        .map(|i| {
            if a[i][i] == T::zero() {
                T::zero()
            } else {
                a[i][k] / a[i][i]
            }
        })
        .collect()
}

/// Every implicational formula over `atoms` with exactly `size` nodes.
pub fn formulas_of_size(atoms: &[&str], size: usize) -> Vec<Formula> {
    let mut memo: Vec<Vec<Formula>> = vec![Vec::new(); size + 1];
    for s in 1..=size {
        if s == 1 {
            memo[1] = atoms.iter().map(|a| Formula::atom(a)).collect();
            continue;
        }
        let mut out = Vec::new();
        let mut left = 1;
        while left + 2 <= s {
            let right = s - 1 - left;
            for a in &memo[left] {
                for b in &memo[right] {
                    out.push(Formula::implies(a.clone(), b.clone()));
                }
            }
            left += 2;
        }
        memo[s] = out;
    }
    std::mem::take(&mut memo[size])
}

/// Minimal closed normal proof size over all formulas with `m` nodes built
/// from the first `atoms` of `p, q`, searching proofs up to `size_bound`
/// nodes. `None` means no such formula has a proof within the bound.
pub fn f_min(
    target_sizes: &[usize],
    atoms: usize,
    size_bound: usize,
) -> Result<BTreeMap<usize, Option<usize>>, StatsError> {
    if atoms > MAX_FMIN_ATOMS {
        return Err(StatsError::TooManyAtoms(atoms));
    }
    if size_bound > MAX_ENUMERATION_SIZE {
        return Err(StatsError::SizeBound(size_bound));
    }
    let names = &["p", "q"][..atoms];
    let mut out = BTreeMap::new();
    for &m in target_sizes.iter().collect::<BTreeSet<_>>() {
        if m == 0 {
            out.insert(0, Some(0));
            continue;
        }
        let mut best: Option<usize> = None;
        if !names.is_empty() {
            for f in formulas_of_size(names, m) {
                let bound = best.map_or(size_bound, |b| b - 1);
                if bound == 0 {
                    break;
                }
                let proofs =
                    enumerate_proofs(&f, bound).map_err(|_| StatsError::SizeBound(bound))?;
                if let Some(s) = proofs.iter().map(|p| p.size()).min() {
                    best = Some(best.map_or(s, |b| b.min(s)));
                }
            }
        }
        out.insert(m, best);
    }
    Ok(out)
}

const CSV_HEADER: &str =
    "instance,n,m,tree_height,tree_size,dag_nodes,dag_edges,ratio,checker_steps,mode";

/// CSV rows sorted by `(mode, n, instance)`, then `#`-prefixed footer lines
/// with growth fits against `m` and caveats.
pub fn family_report(f: &ProofFamily) -> Result<String, StatsError> {
    if f.rows.is_empty() && f.skipped.is_empty() {
        return Err(StatsError::EmptyFamily);
    }
    let mut rows: Vec<&FamilyRow> = f.rows.iter().collect();
    rows.sort_by(|a, b| (a.mode, a.n, &a.instance).cmp(&(b.mode, b.n, &b.instance)));
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{:.4},{},{}",
            r.instance,
            r.n,
            r.m,
            r.tree_height,
            r.tree_size,
            r.dag_nodes,
            r.dag_edges,
            r.tree_size as f64 / (r.dag_nodes + r.dag_edges) as f64,
            r.checker_steps,
            r.mode
        );
    }
    let modes: BTreeSet<Mode> = rows.iter().map(|r| r.mode).collect();
    for mode in modes {
        let of_mode: Vec<&&FamilyRow> = rows.iter().filter(|r| r.mode == mode).collect();
        let accepted = of_mode.iter().filter(|r| r.accepted).count();
        let _ = writeln!(
            out,
            "#check family={} mode={mode} accepted={accepted}/{}",
            f.name,
            of_mode.len()
        );
        type Metric = fn(&FamilyRow) -> f64;
        let metrics: [(&str, Metric); 4] = [
            ("tree_size", |r| r.tree_size as f64),
            ("tree_height", |r| r.tree_height as f64),
            ("dag_size", |r| (r.dag_nodes + r.dag_edges) as f64),
            ("checker_steps", |r| r.checker_steps as f64),
        ];
        for (name, get) in metrics {
            // one point per conclusion size; repeats keep the largest value
            let mut by_m: BTreeMap<usize, f64> = BTreeMap::new();
            for r in &of_mode {
                let v = get(r);
                by_m.entry(r.m).and_modify(|x| *x = x.max(v)).or_insert(v);
            }
            let series: Vec<(f64, f64)> = by_m.into_iter().map(|(m, v)| (m as f64, v)).collect();
            match growth_fit(&series) {
                Ok(fit) => {
                    let _ = writeln!(
                        out,
                        "#fit mode={mode} metric={name} degree={} slope={:.4} residual={:.4} curvature={:.4} verdict={}",
                        fit.degree,
                        fit.slope,
                        fit.residual,
                        fit.curvature,
                        fit.verdict.as_str()
                    );
                }
                Err(e) => {
                    let _ = writeln!(out, "#fit mode={mode} metric={name} none ({e})");
                }
            }
        }
    }
    let _ = writeln!(out, "#skipped not_a_tautology={}", f.skipped.len());
    out.push_str("#note fits are descriptive; finite data cannot decide super-polynomial growth\n");
    out.push_str("#note minimal proof sizes are relative to this natural deduction system only\n");
    out.push_str("#note the family is assumed unlimited by construction; this is not checked\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(instance: &str, n: usize, m: usize, size: usize) -> FamilyRow {
        FamilyRow {
            instance: instance.to_string(),
            n,
            m,
            tree_height: size / 2,
            tree_size: size,
            dag_nodes: size,
            dag_edges: size - 1,
            checker_steps: 10 * size as u64,
            mode: Mode::Subtree,
            accepted: true,
        }
    }

    #[test]
    fn exact_power_laws() {
        for degree in 1..=4 {
            let series: Vec<(f64, f64)> = (4..=64)
                .map(|m| (m as f64, (m as f64).powi(degree)))
                .collect();
            let fit = growth_fit(&series).unwrap();
            assert_eq!(fit.degree, degree as u32);
            assert_eq!(fit.verdict, GrowthVerdict::PolynomialFit);
            assert!(fit.residual < 1e-9);
        }
        let fit32 = growth_fit(&[(1.0f32, 3.0), (2.0, 12.0), (3.0, 27.0), (4.0, 48.0)]).unwrap();
        assert_eq!(fit32.degree, 2);
    }

    #[test]
    fn exponential_is_flagged() {
        let series: Vec<(f64, f64)> = (4..=20).map(|m| (m as f64, 2f64.powi(m))).collect();
        assert_eq!(
            growth_fit(&series).unwrap().verdict,
            GrowthVerdict::SuperpolynomialSuspect
        );
    }

    #[test]
    fn fit_errors() {
        assert_eq!(growth_fit(&[(1.0, 1.0); 3]), Err(FitError::TooFewPoints(3)));
        let flat = [(1.0, 1.0), (2.0, 1.0), (2.0, 1.0), (3.0, 1.0)];
        assert_eq!(growth_fit(&flat), Err(FitError::NotIncreasing));
        let zero = [(1.0, 0.0), (2.0, 1.0), (3.0, 1.0), (4.0, 1.0)];
        assert_eq!(growth_fit(&zero), Err(FitError::NonPositive));
    }

    #[test]
    fn f_min_small_sizes() {
        let f = f_min(&[0, 1, 2, 3], 2, 12).unwrap();
        assert_eq!(f[&0], Some(0));
        assert_eq!(f[&1], None);
        assert_eq!(f[&2], None);
        assert_eq!(f[&3], Some(2));
        assert_eq!(f_min(&[3], 3, 12), Err(StatsError::TooManyAtoms(3)));
        assert_eq!(f_min(&[3], 2, 13), Err(StatsError::SizeBound(13)));
    }

    #[test]
    fn formula_counts() {
        // Catalan numbers times 2^leaves
        assert_eq!(formulas_of_size(&["p", "q"], 1).len(), 2);
        assert_eq!(formulas_of_size(&["p", "q"], 3).len(), 4);
        assert_eq!(formulas_of_size(&["p", "q"], 5).len(), 16);
        assert_eq!(formulas_of_size(&["p", "q"], 7).len(), 80);
        assert!(formulas_of_size(&["p", "q"], 4).is_empty());
    }

    #[test]
    fn report_layout() {
        let mut fam = ProofFamily::new("path");
        for (n, m, s) in [(5, 300, 900), (3, 100, 100), (4, 200, 400)] {
            fam.add_row(row(&format!("path-{n}"), n, m, s)).unwrap();
        }
        assert!(matches!(
            fam.add_row(row("path-3", 3, 100, 100)),
            Err(StatsError::DuplicateRow(..))
        ));
        let text = family_report(&fam).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "path-3,3,100,50,100,100,99,0.5025,1000,subtree");
        assert!(lines[3].starts_with("path-5,"));
        assert!(text
            .contains("#fit mode=subtree metric=tree_size none (need at least 4 points, got 3)"));
        assert!(text.contains("#skipped not_a_tautology=0"));
        assert_eq!(family_report(&fam).unwrap(), text);
        assert_eq!(
            family_report(&ProofFamily::new("x")),
            Err(StatsError::EmptyFamily)
        );
        let mut cycles = ProofFamily::new("cycle");
        cycles.add_skipped("cycle-3");
        assert!(family_report(&cycles)
            .unwrap()
            .contains("#skipped not_a_tautology=1"));
    }
}
