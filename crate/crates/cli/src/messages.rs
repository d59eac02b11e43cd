//! Message-table override files.
//!
//! One record per line: `feature_id,direction,sentence` with direction
//! `increase` or `decrease`; blank and `#`-prefixed lines are skipped. Rows
//! replace the built-in sentence for that (feature, direction) pair; unknown
//! feature ids and malformed rows are rejected with the full problem list.

use std::fs;
use std::path::Path;

use pydesign_core::feedback::{Direction, MessageTable};
use pydesign_core::schema::FeatureSchema;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("message table {path}: {problems:?}")]
pub struct MessageFileError {
    pub path: String,
    pub problems: Vec<String>,
}

/// Default table plus the overrides in `path`.
pub fn load_message_table(
    path: &Path,
    schema: &FeatureSchema,
) -> Result<MessageTable, MessageFileError> {
    let fail = |problems: Vec<String>| MessageFileError {
        path: path.display().to_string(),
        problems,
    };
    let text = fs::read_to_string(path).map_err(|e| fail(vec![e.to_string()]))?;

    let mut table = MessageTable::defaults(schema);
    let mut problems = Vec::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.splitn(3, ',').map(str::trim);
        let (Some(id), Some(direction), Some(sentence)) =
            (fields.next(), fields.next(), fields.next())
        else {
            problems.push(format!("line {}: expected `feature_id,direction,sentence`", i + 1));
            continue;
        };
        let id: u8 = match id.parse() {
            Ok(id) if schema.by_id(id).is_some() => id,
            _ => {
                problems.push(format!("line {}: unknown feature id `{id}`", i + 1));
                continue;
            }
        };
        let direction = match direction {
            "increase" => Direction::Increase,
            "decrease" => Direction::Decrease,
            other => {
                problems.push(format!(
                    "line {}: direction must be increase or decrease, got `{other}`",
                    i + 1
                ));
                continue;
            }
        };
        if sentence.is_empty() {
            problems.push(format!("line {}: empty sentence", i + 1));
            continue;
        }
        table.entries.insert((id, direction), sentence.to_string());
    }

    if problems.is_empty() {
        Ok(table)
    } else {
        Err(fail(problems))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_one_pair_and_keeps_defaults() {
        let schema = FeatureSchema::current();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("messages.csv");
        fs::write(&path, "# overrides\n1,increase,Add more helper functions.\n").unwrap();
        let table = load_message_table(&path, &schema).unwrap();
        assert_eq!(table.message(1, Direction::Increase), "Add more helper functions.");
        assert_eq!(
            table.message(1, Direction::Decrease),
            FeatureSchema::default_decrease_phrase(schema.by_id(1).unwrap())
        );
    }

    #[test]
    fn unknown_id_and_bad_direction_rejected_together() {
        let schema = FeatureSchema::current();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("messages.csv");
        fs::write(&path, "40,increase,Nope.\n2,sideways,Nope.\nbroken\n").unwrap();
        let err = load_message_table(&path, &schema).unwrap_err();
        assert_eq!(err.problems.len(), 3);
    }
}
