//! Pool-adjacent-violators for unweighted isotonic regression.

/// Replaces `values` by its least-squares non-decreasing fit.
pub fn pava_non_decreasing(values: &mut [f64]) {
    // Blocks as (sum, count), merged while the last two are out of order.
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values.iter() {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (s1, c1) = blocks[blocks.len() - 1];
            let (s0, c0) = blocks[blocks.len() - 2];
            if s0 / c0 as f64 <= s1 / c1 as f64 {
                break;
            }
            blocks.pop();
            *blocks.last_mut().expect("two blocks") = (s0 + s1, c0 + c1);
        }
    }
    let mut k = 0;
    for (sum, count) in blocks {
        let mean = sum / count as f64;
        values[k..k + count].iter_mut().for_each(|v| *v = mean);
        k += count;
    }
}

/// Least-squares non-increasing fit, via the non-decreasing kernel on the
/// reversed sequence.
pub fn pava_non_increasing(values: &mut [f64]) {
    values.reverse();
    pava_non_decreasing(values);
    values.reverse();
}
