use std::f64::consts::PI;

/// Parses `8pi/9`, `-pi/3`, `pi`, `8.6π/9`, `2*pi/3` or a plain number of
/// radians.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t: String = s.trim().replace('π', "pi").replace(' ', "");
    let bad = || format!("cannot read angle '{s}' (try 8pi/9, -pi/3 or 1.25)");
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().map_err(|_| bad()).and_then(finite(bad()));
    };
    let head = t[..pos].trim_end_matches('*');
    let tail = &t[pos + 2..];
    let coeff = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let denom = match tail {
        "" => 1.0,
        d => d
            .strip_prefix('/')
            .ok_or_else(bad)?
            .parse::<f64>()
            .map_err(|_| bad())?,
    };
    if denom == 0.0 {
        return Err(bad());
    }
    finite(bad())(coeff * PI / denom)
}

fn finite(err: String) -> impl FnOnce(f64) -> Result<f64, String> {
    move |v| if v.is_finite() { Ok(v) } else { Err(err) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        let cases = [
            ("8pi/9", 8.0 * PI / 9.0),
            ("-pi/3", -PI / 3.0),
            ("pi", PI),
            ("-pi", -PI),
            ("8.6π/9", 8.6 * PI / 9.0),
            ("2*pi/3", 2.0 * PI / 3.0),
            ("0.5", 0.5),
            (" -1e-1 ", -0.1),
        ];
        for (s, want) in cases {
            assert!((parse_angle(s).unwrap() - want).abs() < 1e-15, "{s}");
        }
        for s in ["", "pi/0", "x", "pi/", "8pi9", "inf"] {
            assert!(parse_angle(s).is_err(), "{s}");
        }
    }
}
