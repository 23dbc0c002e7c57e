//! Formatting helpers for serialized numbers.
//!
//! File outputs (state JSON, reports, CSV) carry 12 significant digits:
//! enough to round-trip every tolerance used by the crate while keeping
//! diffs readable.

/// Formats `x` in scientific notation with 12 significant digits.
pub fn fmt_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Rounds `x` to 12 significant digits.
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    fmt_sig12(x).parse().expect("scientific notation round-trip")
}

/// Rounds every float in a JSON tree to 12 significant digits; integers
/// (counts, dimensions) pass through untouched.
pub fn round_json_sig12(value: &mut serde_json::Value) {
    use serde_json::Value;
    match value {
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                return;
            }
            if let Some(x) = n.as_f64() {
                if let Some(rounded) = serde_json::Number::from_f64(round_sig12(x)) {
                    *value = Value::Number(rounded);
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json_sig12),
        Value::Object(map) => map.values_mut().for_each(round_json_sig12),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig12(0.75), 0.75);
        assert_eq!(round_sig12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig12(-1.0 / 3.0), -0.333333333333);
        assert_eq!(round_sig12(0.0), 0.0);
        assert_eq!(round_sig12(1.234567890123456e-8), 1.23456789012e-8);
    }

    #[test]
    fn json_rounding_preserves_integers() {
        let mut v = serde_json::json!({
            "dim": 3,
            "value": 1.0f64 / 3.0,
            "nested": [1, 2.000000000000555f64],
        });
        round_json_sig12(&mut v);
        assert_eq!(v["dim"], serde_json::json!(3));
        assert_eq!(v["value"], serde_json::json!(0.333333333333));
        assert_eq!(v["nested"][0], serde_json::json!(1));
        assert_eq!(v["nested"][1], serde_json::json!(2.00000000000));
    }

    #[test]
    fn formatted_numbers_parse_back() {
        for &x in &[0.5, -0.123456789, 3.0e-15, 1.0, 0.999999999999] {
            let s = fmt_sig12(x);
            let y: f64 = s.parse().unwrap();
            assert!((x - y).abs() <= x.abs() * 1e-11 + 1e-300, "{s}");
        }
    }
}
