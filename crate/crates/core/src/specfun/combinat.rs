/// Binomial coefficient C(n, k) as a float.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r.round()
}

/// Weak compositions of `k` into `s` nonnegative parts, in lexicographic order.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<usize>>,
}

pub fn compositions(k: usize, s: usize) -> Compositions {
    let current = if s == 0 {
        if k == 0 {
            Some(Vec::new())
        } else {
            None
        }
    } else {
        let mut v = vec![0; s];
        v[s - 1] = k;
        Some(v)
    };
    Compositions { current }
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let s = out.len();
        // find the last position with mass somewhere to its right
        let mut next = out.clone();
        let mut right = 0;
        let mut j = s;
        while j > 1 {
            j -= 1;
            right += next[j];
            if right > 0 {
                let pos = j - 1;
                next[pos] += 1;
                for v in next.iter_mut().skip(pos + 1) {
                    *v = 0;
                }
                next[s - 1] = right - 1;
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_enumerations() {
        let v: Vec<_> = compositions(2, 2).collect();
        assert_eq!(v, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        let v: Vec<_> = compositions(0, 3).collect();
        assert_eq!(v, vec![vec![0, 0, 0]]);
        assert_eq!(compositions(3, 2).count(), 4);
        assert_eq!(compositions(5, 1).collect::<Vec<_>>(), vec![vec![5]]);
    }

    #[test]
    fn counts_and_order() {
        for s in 1..=5usize {
            for k in 0..=8usize {
                let all: Vec<_> = compositions(k, s).collect();
                assert_eq!(all.len() as f64, binomial((k + s - 1) as u64, (s - 1) as u64));
                assert!(all.iter().all(|c| c.iter().sum::<usize>() == k));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(5, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
        assert_eq!(binomial(30, 15), 155_117_520.0);
    }
}
