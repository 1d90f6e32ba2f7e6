//! Structural comparison of a report against a golden fixture.

use serde_json::Value;

/// Keys whose values are inherently run-dependent and never compared.
pub const VOLATILE_KEYS: &[&str] = &["seconds"];

/// Lists every difference between `report` and `fixture` as `path: detail`.
/// An empty list means the two agree.
pub fn compare(report: &Value, fixture: &Value) -> Vec<String> {
    let mut out = Vec::new();
    diff(report, fixture, "$", &mut out);
    out
}

fn diff(a: &Value, b: &Value, path: &str, out: &mut Vec<String>) {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            for (k, va) in x {
                if VOLATILE_KEYS.contains(&k.as_str()) {
                    continue;
                }
                let p = format!("{path}.{k}");
                match y.get(k) {
                    Some(vb) => diff(va, vb, &p, out),
                    None => out.push(format!("{p}: missing from fixture")),
                }
            }
            for k in y.keys() {
                if !x.contains_key(k) && !VOLATILE_KEYS.contains(&k.as_str()) {
                    out.push(format!("{path}.{k}: missing from report"));
                }
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                out.push(format!("{path}: length {} vs {}", x.len(), y.len()));
            }
            for (i, (va, vb)) in x.iter().zip(y).enumerate() {
                diff(va, vb, &format!("{path}[{i}]"), out);
            }
        }
        _ if a != b => out.push(format!("{path}: {a} vs {b}")),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn identical_values_have_no_diff() {
        let v = json!({"a": [1, {"b": "x"}], "c": null});
        assert!(compare(&v, &v).is_empty());
    }

    #[test]
    fn differences_are_located_by_path() {
        let a = json!({"a": [1, 2], "b": {"c": 1}, "only_a": 0, "seconds": 1.5});
        let b = json!({"a": [1, 3, 4], "b": {"c": 2}, "only_b": 0, "seconds": 9.0});
        let d = compare(&a, &b);
        assert!(d.contains(&"$.a: length 2 vs 3".to_string()));
        assert!(d.contains(&"$.a[1]: 2 vs 3".to_string()));
        assert!(d.contains(&"$.b.c: 1 vs 2".to_string()));
        assert!(d.contains(&"$.only_a: missing from fixture".to_string()));
        assert!(d.contains(&"$.only_b: missing from report".to_string()));
        assert_eq!(d.len(), 5);
    }
}
