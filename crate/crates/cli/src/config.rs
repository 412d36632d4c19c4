//! JSON scenario documents for `classify`.

use std::path::Path;

use lcstab::scenario::ScenarioSpec;
use lcstab::Error;

/// Reads a scenario document; schema errors carry the failing field path.
pub fn load(path: &Path) -> Result<ScenarioSpec, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config { path: path.display().to_string(), message: e.to_string() })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<ScenarioSpec, Error> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let spec: ScenarioSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let p = e.path().to_string();
        Error::Config { path: if p == "." { "<root>".into() } else { p }, message: e.into_inner().to_string() }
    })?;
    // Surface semantic problems (empty families, bad presets) as config errors too.
    spec.evolution().map_err(|e| match e {
        Error::Config { .. } => e,
        other => Error::Config { path: "semigroup".into(), message: other.to_string() },
    })?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    const OK: &str = r#"{
        "name": "cn-example",
        "truncation": 50,
        "semigroup": {
            "kind": "diagonal",
            "space": "c0:cn",
            "exponents": "-1/j",
            "seminorms": [],
            "ladder_levels": true,
            "points": [{"basis": 1}, "ones"],
            "sets": [{"order-interval": "ones"}]
        }
    }"#;

    #[test]
    fn parses_diagonal() {
        let s = parse(OK).unwrap();
        assert_eq!(s.truncation, 50);
    }

    #[test]
    fn schema_error_names_field() {
        let bad = OK.replace("\"truncation\": 50", "\"truncation\": \"many\"");
        match parse(&bad) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "truncation"),
            other => panic!("{other:?}"),
        }
        let bad = OK.replace("\"ladder_levels\": true", "\"ladder_levels\": false");
        match parse(&bad) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "semigroup.seminorms"),
            other => panic!("{other:?}"),
        }
        let bad = OK.replace("c0:cn", "c0:nope");
        assert!(matches!(parse(&bad), Err(Error::Config { .. })));
    }
}
