use genepy_core::{EntityMap, MapRule};
use serde::{Deserialize, Serialize};

use super::ParseError;

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    #[serde(default)]
    renames: Vec<RuleFile>,
    #[serde(default)]
    splits: Vec<RuleFile>,
    #[serde(default)]
    merges: Vec<RuleFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    introductions: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    retirements: Vec<String>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RuleFile {
    from: Ids,
    to: Ids,
}

/// A bare string is accepted as a one-element list.
#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum Ids {
    One(String),
    Many(Vec<String>),
}

impl From<Ids> for Vec<String> {
    fn from(ids: Ids) -> Self {
        match ids {
            Ids::One(s) => vec![s],
            Ids::Many(v) => v,
        }
    }
}

fn rules(v: Vec<RuleFile>) -> Vec<MapRule> {
    v.into_iter()
        .map(|r| MapRule {
            from: r.from.into(),
            to: r.to.into(),
        })
        .collect()
}

fn files(v: &[MapRule]) -> Vec<RuleFile> {
    v.iter()
        .map(|r| RuleFile {
            from: Ids::Many(r.from.clone()),
            to: Ids::Many(r.to.clone()),
        })
        .collect()
}

/// `{"renames": [...], "splits": [...], "merges": [...]}` with each rule
/// `{"from": [...], "to": [...]}`; `introductions` and `retirements` are
/// optional id lists.
pub fn parse_entity_map(text: &str) -> Result<EntityMap, ParseError> {
    let f: MapFile = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    Ok(EntityMap {
        renames: rules(f.renames),
        splits: rules(f.splits),
        merges: rules(f.merges),
        introductions: f.introductions,
        retirements: f.retirements,
    })
}

pub fn emit_entity_map(map: &EntityMap) -> String {
    let f = MapFile {
        renames: files(&map.renames),
        splits: files(&map.splits),
        merges: files(&map.merges),
        introductions: map.introductions.clone(),
        retirements: map.retirements.clone(),
    };
    let mut s = serde_json::to_string_pretty(&f).expect("plain data serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_all_rule_kinds() {
        let m = parse_entity_map(
            r#"{"renames": [{"from": "OR", "to": ["OD"]}],
                "splits": [{"from": ["AP"], "to": ["AP", "TG"]}],
                "merges": [{"from": ["DN", "DD"], "to": ["DNDD"]}],
                "introductions": ["LA"]}"#,
        )
        .unwrap();
        assert_eq!(m.renames, [MapRule::new(&["OR"], &["OD"])]);
        assert_eq!(m.splits, [MapRule::new(&["AP"], &["AP", "TG"])]);
        assert_eq!(m.merges[0].from, ["DN", "DD"]);
        assert_eq!(m.introductions, ["LA"]);
        assert!(m.retirements.is_empty());
        assert_eq!(parse_entity_map(&emit_entity_map(&m)).unwrap(), m);
    }

    #[test]
    fn empty_object_is_the_empty_map() {
        assert!(parse_entity_map("{}").unwrap().is_empty());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(parse_entity_map(r#"{"rename": []}"#), Err(ParseError::Json(_))));
        assert!(matches!(parse_entity_map("[1, 2]"), Err(ParseError::Json(_))));
    }
}
