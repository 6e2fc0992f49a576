//! Deterministic numeric formatting for the CSV exports: 10 significant
//! digits, trailing zeros trimmed, scientific notation outside the
//! positional range (printf `%.10g` semantics).

pub fn fmt_g10(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".to_string() } else { "-inf".to_string() };
    }
    let neg = x < 0.0;
    let sci = format!("{:.9e}", x.abs());
    let (mant, exp) = sci.split_once('e').expect("exponential format");
    let exp: i32 = exp.parse().expect("exponent");
    let digits: Vec<u8> = mant.bytes().filter(|b| b.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 10);
    let digits = String::from_utf8(digits).expect("ascii digits");

    let body = if !(-4..10).contains(&exp) {
        let trimmed = digits.trim_end_matches('0');
        let trimmed = if trimmed.is_empty() { "0" } else { trimmed };
        let mut m = String::new();
        m.push_str(&trimmed[..1]);
        if trimmed.len() > 1 {
            m.push('.');
            m.push_str(&trimmed[1..]);
        }
        format!("{m}e{exp}")
    } else if exp >= 0 {
        let split = exp as usize + 1;
        let int_part = &digits[..split];
        let frac = digits[split..].trim_end_matches('0');
        if frac.is_empty() {
            int_part.to_string()
        } else {
            format!("{int_part}.{frac}")
        }
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        let frac = format!("{zeros}{digits}");
        let frac = frac.trim_end_matches('0');
        format!("0.{frac}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}
