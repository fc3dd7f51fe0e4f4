//! Cyclic words: least rotation and minimal period.

/// Start index of the lexicographically least rotation (Booth's algorithm).
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| &s[i % n];
    let mut f: Vec<isize> = vec![-1; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let mut i = f[j - k - 1];
        while i != -1 && at(j) != at(k + i as usize + 1) {
            if at(j) < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = f[i as usize];
        }
        if i == -1 && at(j) != at(k) {
            if at(j) < at(k) {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    k % n
}

/// The rotation of `s` starting at its least rotation index.
pub fn canonical_rotation<T: Ord + Clone>(s: &[T]) -> Vec<T> {
    let k = least_rotation(s);
    s[k..].iter().chain(&s[..k]).cloned().collect()
}

/// Smallest p dividing len(s) with s equal to its own rotation by p.
pub fn minimal_period<T: Eq>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    // prefix function
    let mut pi = vec![0usize; n];
    for i in 1..n {
        let mut k = pi[i - 1];
        while k > 0 && s[i] != s[k] {
            k = pi[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        pi[i] = k;
    }
    let p = n - pi[n - 1];
    if n.is_multiple_of(p) {
        p
    } else {
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_least(s: &[u8]) -> Vec<u8> {
        (0..s.len())
            .map(|k| s[k..].iter().chain(&s[..k]).cloned().collect::<Vec<_>>())
            .min()
            .unwrap_or_default()
    }

    fn brute_period(s: &[u8]) -> usize {
        let n = s.len();
        (1..=n)
            .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| s[i] == s[(i + p) % n]))
            .unwrap_or(0)
    }

    #[test]
    fn small_words() {
        assert_eq!(canonical_rotation(&[3, 1, 2]), vec![1, 2, 3]);
        assert_eq!(canonical_rotation(&[2, 1, 2, 1]), vec![1, 2, 1, 2]);
        assert_eq!(minimal_period(&[1, 2, 3, 1, 2, 3]), 3);
        assert_eq!(minimal_period(&[1, 2, 1]), 3);
        assert_eq!(minimal_period(&[5, 5, 5]), 1);
    }

    proptest! {
        #[test]
        fn least_rotation_matches_brute_force(s in prop::collection::vec(0u8..3, 1..14)) {
            prop_assert_eq!(canonical_rotation(&s), brute_least(&s));
        }

        #[test]
        fn period_matches_brute_force(s in prop::collection::vec(0u8..2, 1..14)) {
            prop_assert_eq!(minimal_period(&s), brute_period(&s));
        }
    }
}
