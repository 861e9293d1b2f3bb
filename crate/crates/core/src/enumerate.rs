//! Small enumeration helpers shared by the exhaustive checks.

/// All tuples `t` with `t[i] < radices[i]`, in lexicographic order.
pub(crate) fn odometer(radices: &[usize]) -> Vec<Vec<usize>> {
    if radices.contains(&0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = vec![0; radices.len()];
    loop {
        out.push(current.clone());
        let mut i = radices.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            current[i] += 1;
            if current[i] < radices[i] {
                break;
            }
            current[i] = 0;
        }
    }
}

/// Number of tuples [`odometer`] would produce, saturating.
pub(crate) fn odometer_len(radices: &[usize]) -> u128 {
    radices.iter().fold(1u128, |acc, &r| acc.saturating_mul(r as u128))
}
