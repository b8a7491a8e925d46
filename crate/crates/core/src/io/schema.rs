//! Minimal structural validator for the published JSON schema files.
//!
//! Supports the subset the schemas under `schemas/` use: `type`,
//! `properties`, `required`, `items`, `enum`, `additionalProperties: false`.

use serde_json::Value;

/// Validate `value` against `schema`; returns the list of violations
/// (empty = valid) as `path: problem` strings.
pub fn validate_against_schema(value: &Value, schema: &Value) -> Vec<String> {
    let mut errors = Vec::new();
    walk(value, schema, "$", &mut errors);
    errors
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

fn matches_type(v: &Value, t: &str) -> bool {
    match t {
        "integer" => v.as_i64().is_some() || v.as_u64().is_some(),
        "number" => v.is_number(),
        other => type_name(v) == other,
    }
}

fn walk(value: &Value, schema: &Value, path: &str, errors: &mut Vec<String>) {
    let Some(schema_obj) = schema.as_object() else {
        return;
    };
    if let Some(t) = schema_obj.get("type") {
        let allowed: Vec<String> = match t {
            Value::String(s) => vec![s.clone()],
            Value::Array(a) => a
                .iter()
                .filter_map(|x| x.as_str().map(str::to_string))
                .collect(),
            _ => vec![],
        };
        if !allowed.iter().any(|t| matches_type(value, t)) {
            errors.push(format!(
                "{path}: expected type {allowed:?}, got {}",
                type_name(value)
            ));
            return;
        }
    }
    if let Some(options) = schema_obj.get("enum").and_then(Value::as_array) {
        if !options.contains(value) {
            errors.push(format!("{path}: value not in enum {options:?}"));
        }
    }
    if let Some(obj) = value.as_object() {
        if let Some(required) = schema_obj.get("required").and_then(Value::as_array) {
            for key in required.iter().filter_map(Value::as_str) {
                if !obj.contains_key(key) {
                    errors.push(format!("{path}: missing required property {key:?}"));
                }
            }
        }
        let properties = schema_obj.get("properties").and_then(Value::as_object);
        if let Some(props) = properties {
            for (key, sub) in obj {
                if let Some(subschema) = props.get(key) {
                    walk(sub, subschema, &format!("{path}.{key}"), errors);
                } else if schema_obj.get("additionalProperties") == Some(&Value::Bool(false)) {
                    errors.push(format!("{path}: unexpected property {key:?}"));
                }
            }
        }
    }
    if let Some(arr) = value.as_array() {
        if let Some(items) = schema_obj.get("items") {
            for (i, item) in arr.iter().enumerate() {
                walk(item, items, &format!("{path}[{i}]"), errors);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn accepts_matching_document() {
        let schema = json!({
            "type": "object",
            "required": ["name", "rows"],
            "additionalProperties": false,
            "properties": {
                "name": {"type": "string"},
                "rows": {"type": "array", "items": {"type": "number"}},
                "kind": {"type": "string", "enum": ["gaussian", "histogram"]}
            }
        });
        let doc = json!({"name": "x", "rows": [1.0, 2], "kind": "gaussian"});
        assert!(validate_against_schema(&doc, &schema).is_empty());
    }

    #[test]
    fn reports_violations_with_paths() {
        let schema = json!({
            "type": "object",
            "required": ["name"],
            "additionalProperties": false,
            "properties": {
                "name": {"type": "string"},
                "count": {"type": "integer"}
            }
        });
        let doc = json!({"count": 1.5, "extra": true});
        let errs = validate_against_schema(&doc, &schema);
        assert!(errs.iter().any(|e| e.contains("missing required property \"name\"")));
        assert!(errs.iter().any(|e| e.contains("$.count")));
        assert!(errs.iter().any(|e| e.contains("unexpected property \"extra\"")));
    }
}
