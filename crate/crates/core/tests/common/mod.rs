//! Brute-force oracles shared by the integration tests. None of these call into
//! the code paths they are used to check.

#![allow(dead_code)]

/// Minimum total length over every assignment of `m` distinct non-empty strings
/// over `n` letters, by depth-first search over how many strings of each length
/// are used (at most `n^l` of length `l`), with branch-and-bound pruning.
pub fn min_total_length_exhaustive(m: usize, n: usize) -> u64 {
    // one string of each length 1..=m is always feasible
    let max_len = m * (m + 1) / 2;
    let mut best = (m * (m + 1) / 2) as u64;
    fn dfs(len: usize, remaining: usize, cost: u64, n: usize, max_len: usize, best: &mut u64) {
        if remaining == 0 {
            *best = (*best).min(cost);
            return;
        }
        if len > max_len || cost + (remaining * len) as u64 >= *best {
            return;
        }
        let available = (n as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
        let most = available.min(remaining as u128) as usize;
        for k in (0..=most).rev() {
            dfs(
                len + 1,
                remaining - k,
                cost + (k * len) as u64,
                n,
                max_len,
                best,
            );
        }
    }
    dfs(1, m, 0, n, max_len, &mut best);
    best
}

/// `ceil(log_N((N-1)/N * i + 1))` evaluated exactly: the smallest `l` with
/// `N^(l+1) >= (N-1) i + N`.
pub fn nonsingular_formula_exact(i: u64, n: u64) -> u32 {
    let target = (n as u128 - 1) * i as u128 + n as u128;
    let mut l = 0u32;
    let mut power = n as u128; // N^(l+1)
    while power < target {
        power *= n as u128;
        l += 1;
    }
    l
}

/// The same formula in floating point, as written.
pub fn nonsingular_formula_float(i: u64, n: u64) -> f64 {
    let n = n as f64;
    (((n - 1.0) / n * i as f64 + 1.0).ln() / n.ln()).ceil()
}

/// True when some string of at most `max_len` letters over `0..n` has two
/// factorizations into `code` words. Counts factorizations of every string by
/// dynamic programming over its suffixes.
pub fn has_double_factorization(code: &[Vec<u8>], n: u8, max_len: usize) -> bool {
    // ways[t][s] = number of factorizations (capped at 2) of the length-t string
    // with base-n digits s
    let n = n as usize;
    let mut ways: Vec<Vec<u8>> = vec![vec![1]];
    for t in 1..=max_len {
        let size = n.pow(t as u32);
        let mut row = vec![0u8; size];
        for (s, slot) in row.iter_mut().enumerate() {
            let mut total = 0u8;
            for w in code {
                let k = w.len();
                if k > t {
                    continue;
                }
                let tail = s % n.pow(k as u32);
                let w_val = w.iter().fold(0usize, |acc, &d| acc * n + d as usize);
                if tail == w_val {
                    total = total.saturating_add(ways[t - k][s / n.pow(k as u32)]);
                }
            }
            *slot = total.min(2);
            if *slot >= 2 {
                return true;
            }
        }
        ways.push(row);
    }
    false
}

/// Every binary word with 1..=max_len letters, as digit vectors.
pub fn binary_words(max_len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for v in 0..(1usize << len) {
            out.push((0..len).rev().map(|b| ((v >> b) & 1) as u8).collect());
        }
    }
    out
}

/// All subsets of `items` with between 1 and `max_size` elements.
pub fn subsets<T: Clone>(items: &[T], max_size: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(
        items: &[T],
        start: usize,
        max: usize,
        cur: &mut Vec<T>,
        out: &mut Vec<Vec<T>>,
    ) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            go(items, i + 1, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, 0, max_size, &mut Vec::new(), &mut out);
    out
}

pub fn digits_to_string(w: &[u8]) -> String {
    w.iter().map(|&d| char::from(b'0' + d)).collect()
}

/// Maximizes the truncated-zeta log-likelihood of `counts` (ranks 1..) on a grid.
pub fn zeta_grid_scan(counts: &[f64], lo: f64, hi: f64, step: f64) -> f64 {
    let ln_i: Vec<f64> = (1..=counts.len()).map(|i| (i as f64).ln()).collect();
    let n: f64 = counts.iter().sum();
    let weighted: f64 = counts.iter().zip(&ln_i).map(|(c, l)| c * l).sum();
    let ll = |a: f64| {
        let h: f64 = ln_i.iter().map(|l| (-a * l).exp()).sum();
        -a * weighted - n * h.ln()
    };
    let steps = ((hi - lo) / step).round() as usize;
    let mut best = (f64::NEG_INFINITY, lo);
    for k in 0..=steps {
        let a = lo + k as f64 * step;
        let v = ll(a);
        if v > best.0 {
            best = (v, a);
        }
    }
    best.1
}
