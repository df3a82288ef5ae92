//! Minimal nonnegative solutions of a single homogeneous linear
//! Diophantine equation `a·x = b·y`.
//!
//! Solutions are found by bounded lexicographic search: in a minimal
//! solution no `x_i` exceeds `max(b)` and no `y_j` exceeds `max(a)`.
//! Columns may carry a tighter upper bound (aliens in AC unification take
//! at most one).

/// Minimal nonzero solutions `(x ++ y)`, ordered by total size then
/// lexicographically.
pub fn minimal_solutions(
    left: &[u32],
    right: &[u32],
    left_cap: &[Option<u32>],
    right_cap: &[Option<u32>],
) -> Vec<Vec<u32>> {
    let max_a = left.iter().copied().max().unwrap_or(0);
    let max_b = right.iter().copied().max().unwrap_or(0);
    let xbound: Vec<u32> = left_cap.iter().map(|c| c.map_or(max_b, |c| c.min(max_b))).collect();
    let ybound: Vec<u32> = right_cap.iter().map(|c| c.map_or(max_a, |c| c.min(max_a))).collect();

    let mut all = Vec::new();
    let mut x = vec![0u32; left.len()];
    enumerate_left(0, 0, left, right, &xbound, &ybound, &mut x, &mut all);

    all.sort_by(|p: &Vec<u32>, q: &Vec<u32>| {
        let sp: u32 = p.iter().sum();
        let sq: u32 = q.iter().sum();
        sp.cmp(&sq).then_with(|| q.cmp(p))
    });
    let mut minimal: Vec<Vec<u32>> = Vec::new();
    for s in all {
        if !minimal.iter().any(|m| m.iter().zip(&s).all(|(a, b)| a <= b)) {
            minimal.push(s);
        }
    }
    minimal
}

#[allow(clippy::too_many_arguments)]
fn enumerate_left(
    i: usize,
    sum: u32,
    left: &[u32],
    right: &[u32],
    xbound: &[u32],
    ybound: &[u32],
    x: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if i == left.len() {
        if sum == 0 {
            return;
        }
        let mut y = vec![0u32; right.len()];
        enumerate_right(0, sum, right, ybound, &mut y, &mut |y| {
            let mut v = x.clone();
            v.extend_from_slice(y);
            out.push(v);
        });
        return;
    }
    for k in 0..=xbound[i] {
        x[i] = k;
        enumerate_left(i + 1, sum + k * left[i], left, right, xbound, ybound, x, out);
    }
    x[i] = 0;
}

fn enumerate_right(j: usize, remaining: u32, right: &[u32], ybound: &[u32], y: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
    if j == right.len() {
        if remaining == 0 {
            emit(y);
        }
        return;
    }
    let mut k = 0;
    while k <= ybound[j] && k * right[j] <= remaining {
        y[j] = k;
        enumerate_right(j + 1, remaining - k * right[j], right, ybound, y, emit);
        k += 1;
    }
    y[j] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive reference over a generous box.
    fn brute(left: &[u32], right: &[u32], limit: u32) -> Vec<Vec<u32>> {
        let n = left.len() + right.len();
        let mut sols = Vec::new();
        let mut v = vec![0u32; n];
        loop {
            let l: u32 = left.iter().zip(&v).map(|(a, x)| a * x).sum();
            let r: u32 = right.iter().zip(&v[left.len()..]).map(|(b, y)| b * y).sum();
            if l == r && v.iter().any(|&c| c > 0) {
                sols.push(v.clone());
            }
            let mut i = 0;
            loop {
                if i == n {
                    let mut min: Vec<Vec<u32>> = sols
                        .iter()
                        .filter(|s| {
                            !sols.iter().any(|t| t != *s && t.iter().zip(s.iter()).all(|(a, b)| a <= b))
                        })
                        .cloned()
                        .collect();
                    min.sort();
                    return min;
                }
                v[i] += 1;
                if v[i] <= limit {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
        }
    }

    fn sorted(mut v: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
        v.sort();
        v
    }

    #[test]
    fn unit_coefficients() {
        let got = minimal_solutions(&[1, 1], &[1, 1], &[None; 2], &[None; 2]);
        assert_eq!(got.len(), 4);
        assert_eq!(sorted(got), brute(&[1, 1], &[1, 1], 3));
    }

    #[test]
    fn matches_brute_force_with_multiplicities() {
        for (l, r) in [(vec![2, 1], vec![1, 1]), (vec![2], vec![1, 1, 1]), (vec![3, 1], vec![2])] {
            let got = minimal_solutions(&l, &r, &vec![None; l.len()], &vec![None; r.len()]);
            assert_eq!(sorted(got), brute(&l, &r, 4), "{l:?} = {r:?}");
        }
    }

    #[test]
    fn caps_restrict_columns() {
        let got = minimal_solutions(&[2], &[1, 1], &[None], &[Some(1), Some(1)]);
        assert_eq!(got, vec![vec![1, 1, 1]]);
    }
}
