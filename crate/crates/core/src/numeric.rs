//! Small numeric helpers shared across modules.

/// Correctly rounded sum of a slice of finite floats (Shewchuk's algorithm,
/// the same scheme Python's `math.fsum` uses).
///
/// Bell expressions evaluated on ±1 strategies must reproduce closed forms
/// such as `β + 2α` bit-for-bit; naive left-to-right summation of
/// `β + α + α + 1 - 1` does not.
pub fn fsum(values: &[f64]) -> f64 {
    let mut partials: Vec<f64> = Vec::with_capacity(values.len());
    for &v in values {
        let mut x = v;
        let mut i = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        partials.truncate(i);
        partials.push(x);
    }

    // Round the partials back into a single double, handling the half-way case.
    let mut n = partials.len();
    if n == 0 {
        return 0.0;
    }
    n -= 1;
    let mut hi = partials[n];
    let mut lo = 0.0;
    while n > 0 {
        let x = hi;
        n -= 1;
        let y = partials[n];
        hi = x + y;
        let yr = hi - x;
        lo = y - yr;
        if lo != 0.0 {
            break;
        }
    }
    if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        let yr = x - hi;
        if y == yr {
            hi = x;
        }
    }
    hi
}

/// Formats `x` with `digits` significant decimal digits in positional
/// notation. Non-finite values print as `NaN`, `inf` or `-inf`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", digits.saturating_sub(1), 0.0);
    }
    let digits = digits.max(1) as i32;
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits - 1 - magnitude).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    // Rounding may carry into a new leading digit (9.9999999996 -> 10.00000000).
    if decimals > 0 {
        let rounded: f64 = s.parse().unwrap_or(x);
        if rounded.abs() >= 10f64.powi(magnitude + 1) {
            return format!("{:.*}", decimals - 1, x);
        }
    }
    s
}

/// Min-entropy in bits of a guessing probability.
pub fn min_entropy_bits(g: f64) -> f64 {
    -g.log2()
}
