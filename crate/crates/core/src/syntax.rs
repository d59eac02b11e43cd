//! Language-neutral syntax representation.
//!
//! The companion crate parses Python source and lowers the parser's AST into
//! this tree: one [`SyntaxNode`] per module, statement, or expression.
//! Wrapper constructs that carry no syntax of their own (argument lists,
//! except-handler headers, keyword argument shells) are flattened into their
//! parent, so node counts are well defined independently of parser internals.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

/// Subkind of a literal node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LiteralKind {
    Int,
    Float,
    Complex,
    Str,
    Bool,
    NoneLit,
    /// bytes, ellipsis — kinds no feature distinguishes.
    Other,
}

/// Syntactic category of a node. Categories no feature needs collapse to `Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    Module,
    FunctionDef,
    ClassDef,
    Assignment,
    AugAssignment,
    IfStmt,
    TryStmt,
    ForStmt,
    WhileStmt,
    Call,
    Comparison,
    ReturnStmt,
    PassStmt,
    BreakStmt,
    ContinueStmt,
    GlobalDecl,
    ImportStmt,
    ListDisplay,
    TupleDisplay,
    Literal(LiteralKind),
    Name,
    Other,
}

/// One node of the lowered syntax tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntaxNode {
    pub kind: NodeKind,
    /// 1-based physical lines; `start_line <= end_line`, children contained.
    pub start_line: u32,
    pub end_line: u32,
    /// Number of enclosing compound-statement bodies. Module-level statements
    /// sit at depth 0; an `elif` continues its chain at the parent `if`'s depth.
    pub block_depth: u32,
    /// Value of an integer literal when it fits in an i64.
    pub int_value: Option<i64>,
    pub children: Vec<SyntaxNode>,
}

impl SyntaxNode {
    pub fn new(kind: NodeKind, start_line: u32, end_line: u32, block_depth: u32) -> Self {
        Self {
            kind,
            start_line,
            end_line,
            block_depth,
            int_value: None,
            children: Vec::new(),
        }
    }
}

/// Raw program text plus the two size facts features read directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceProgram {
    pub source_text: String,
    /// Physical lines; a trailing newline does not open an extra empty line.
    pub line_count: usize,
    pub char_count: usize,
}

impl SourceProgram {
    pub fn from_text(source_text: String) -> Self {
        let line_count = source_text.lines().count();
        let char_count = source_text.chars().count();
        Self {
            source_text,
            line_count,
            char_count,
        }
    }
}

/// Parsed program: the tree plus token-level facts the tree discards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgramSyntax {
    /// Root kind is always [`NodeKind::Module`].
    pub tree: SyntaxNode,
    /// `#` comments from the token stream (docstrings are literals, not comments).
    pub comment_count: usize,
    /// Lines that are empty or whitespace-only.
    pub blank_line_count: usize,
    /// Spaces, tabs, newlines, and carriage returns in the source.
    pub whitespace_char_count: usize,
    /// Distinct names assigned at module scope or named in a `global`
    /// declaration; imports and def/class names excluded. Computed by the
    /// parser bridge, which knows target vs value roles.
    pub distinct_global_count: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn line_count_ignores_trailing_newline() {
        assert_eq!(SourceProgram::from_text("a\nb\n".to_string()).line_count, 2);
        assert_eq!(SourceProgram::from_text("a\nb".to_string()).line_count, 2);
        assert_eq!(SourceProgram::from_text("".to_string()).line_count, 0);
        assert_eq!(SourceProgram::from_text("a\n\n".to_string()).line_count, 2);
    }

    #[test]
    fn char_count_matches_text() {
        let p = SourceProgram::from_text("x = 1\n".to_string());
        assert_eq!(p.char_count, 6);
    }
}
