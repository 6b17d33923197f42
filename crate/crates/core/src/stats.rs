//! Small statistics helpers shared by the fitting code.

/// Least-squares line through `(x, y)` points, returned as `(slope, intercept)`.
///
/// `None` when there are fewer than two points or all `x` are equal.
pub fn ols(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let mut acc = OlsAccumulator::default();
    for (&x, &y) in xs.iter().zip(ys) {
        acc.push(x, y);
    }
    acc.fit()
}

/// Running sums for a least-squares line, for inputs too long to materialize.
#[derive(Debug, Clone, Copy, Default)]
pub struct OlsAccumulator {
    n: f64,
    sx: f64,
    sy: f64,
    sxx: f64,
    sxy: f64,
}

impl OlsAccumulator {
    pub fn push(&mut self, x: f64, y: f64) {
        self.n += 1.0;
        self.sx += x;
        self.sy += y;
        self.sxx += x * x;
        self.sxy += x * y;
    }

    pub fn count(&self) -> usize {
        self.n as usize
    }

    pub fn fit(&self) -> Option<(f64, f64)> {
        if self.n < 2.0 {
            return None;
        }
        let var_x = self.sxx - self.sx * self.sx / self.n;
        if var_x <= 1e-12 * self.sxx.abs().max(1.0) {
            return None;
        }
        let cov = self.sxy - self.sx * self.sy / self.n;
        let slope = cov / var_x;
        Some((slope, (self.sy - slope * self.sx) / self.n))
    }
}

/// 1-based ranks with ties sharing their mean rank.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let mid = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = mid;
        }
        start = end;
    }
    ranks
}

/// Pearson correlation; `None` if either side has zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let mx = xs[..n].iter().sum::<f64>() / n as f64;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman rank correlation with midranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    pearson(&midranks(xs), &midranks(ys))
}

/// Largest gap between the cumulative sums of two weight vectors, each
/// normalized to total one.
pub fn ks_distance(observed: &[f64], model: &[f64]) -> f64 {
    let total_obs: f64 = observed.iter().sum();
    let total_model: f64 = model.iter().sum();
    let (mut co, mut cm, mut d) = (0.0f64, 0.0f64, 0.0f64);
    for (&o, &m) in observed.iter().zip(model) {
        co += o / total_obs;
        cm += m / total_model;
        d = d.max((co - cm).abs());
    }
    d.min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ols_exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 - 0.75 * x).collect();
        let (s, c) = ols(&xs, &ys).unwrap();
        assert!((s + 0.75).abs() < 1e-12 && (c - 2.5).abs() < 1e-12);
        assert!(ols(&[1.0], &[1.0]).is_none());
        assert!(ols(&[1.0, 1.0], &[1.0, 2.0]).is_none());
    }

    #[test]
    fn midranks_share_ties() {
        assert_eq!(midranks(&[10.0, 20.0, 10.0, 30.0]), [1.5, 3.0, 1.5, 4.0]);
    }

    #[test]
    fn spearman_monotone() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(spearman(&xs, &[10.0, 20.0, 35.0, 100.0]), Some(1.0));
        assert_eq!(spearman(&xs, &[4.0, 3.0, 2.0, 1.0]), Some(-1.0));
        assert_eq!(spearman(&xs, &[1.0; 4]), None);
    }

    #[test]
    fn ks_identical_is_zero() {
        assert_eq!(ks_distance(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]), 0.0);
        assert!((ks_distance(&[1.0, 0.0], &[0.0, 1.0]) - 1.0).abs() < 1e-15);
    }
}
