//! Python 3 parsing and lowering.
//!
//! Parsing proper is delegated to `rustpython-parser`; this module lowers its
//! AST into the core [`SyntaxNode`] tree with a fixed granularity: one node
//! per module, statement, or expression. Wrapper pieces the grammar needs but
//! no feature reads (argument lists, except-handler shells, keyword-argument
//! wrappers) dissolve into their parent, so node counts do not depend on
//! parser internals.

use std::collections::BTreeSet;

use pydesign_core::syntax::{LiteralKind, NodeKind, ProgramSyntax, SourceProgram, SyntaxNode};
use rustpython_parser::ast::{self, Ranged};
use rustpython_parser::text_size::TextRange;
use rustpython_parser::{lexer, Mode, Tok};

/// Parse failure in a submission. Surfaced, never scored.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at line {line}: {message}")]
pub struct PySyntaxError {
    pub line: usize,
    pub message: String,
}

/// Byte-offset to 1-based line lookup.
struct LineIndex {
    line_starts: Vec<usize>,
}

impl LineIndex {
    fn new(text: &str) -> Self {
        let mut line_starts = vec![0];
        for (i, b) in text.bytes().enumerate() {
            if b == b'\n' {
                line_starts.push(i + 1);
            }
        }
        Self { line_starts }
    }

    fn line_of(&self, offset: usize) -> u32 {
        self.line_starts.partition_point(|&s| s <= offset) as u32
    }
}

struct Lowering<'a> {
    index: &'a LineIndex,
    global_names: BTreeSet<String>,
}

fn literal_kind(value: &ast::Constant) -> (LiteralKind, Option<i64>) {
    match value {
        ast::Constant::Bool(_) => (LiteralKind::Bool, None),
        ast::Constant::Int(big) => {
            let small = i64::try_from(big.clone()).ok();
            (LiteralKind::Int, small)
        }
        ast::Constant::Float(_) => (LiteralKind::Float, None),
        ast::Constant::Complex { .. } => (LiteralKind::Complex, None),
        ast::Constant::Str(_) => (LiteralKind::Str, None),
        ast::Constant::None => (LiteralKind::NoneLit, None),
        _ => (LiteralKind::Other, None),
    }
}

/// Collect names bound by an assignment target (tuples unpack, attribute and
/// subscript targets bind nothing).
fn target_names(expr: &ast::Expr, out: &mut BTreeSet<String>) {
    match expr {
        ast::Expr::Name(name) => {
            out.insert(name.id.to_string());
        }
        ast::Expr::Tuple(t) => t.elts.iter().for_each(|e| target_names(e, out)),
        ast::Expr::List(l) => l.elts.iter().for_each(|e| target_names(e, out)),
        ast::Expr::Starred(s) => target_names(&s.value, out),
        _ => {}
    }
}

impl Lowering<'_> {
    fn node(&self, kind: NodeKind, range: TextRange, depth: u32) -> SyntaxNode {
        let start = self.index.line_of(range.start().to_usize());
        let end_offset = range.end().to_usize();
        let end = if end_offset > range.start().to_usize() {
            self.index.line_of(end_offset - 1)
        } else {
            start
        };
        SyntaxNode::new(kind, start.max(1), end.max(1), depth)
    }

    /// Widen the span so children are always contained (decorators, for
    /// instance, sit above their `def` line).
    fn finish(&self, mut node: SyntaxNode) -> SyntaxNode {
        for child in &node.children {
            node.start_line = node.start_line.min(child.start_line);
            node.end_line = node.end_line.max(child.end_line);
        }
        node
    }

    fn lower_body(&mut self, body: &[ast::Stmt], depth: u32, module_scope: bool) -> Vec<SyntaxNode> {
        body.iter().map(|s| self.lower_stmt(s, depth, module_scope)).collect()
    }

    fn lower_exprs(&mut self, exprs: &[ast::Expr], depth: u32) -> Vec<SyntaxNode> {
        exprs.iter().map(|e| self.lower_expr(e, depth)).collect()
    }

    fn lower_arguments(&mut self, args: &ast::Arguments, depth: u32, out: &mut Vec<SyntaxNode>) {
        for awd in args.posonlyargs.iter().chain(&args.args).chain(&args.kwonlyargs) {
            if let Some(annotation) = &awd.def.annotation {
                out.push(self.lower_expr(annotation, depth));
            }
            if let Some(default) = &awd.default {
                out.push(self.lower_expr(default, depth));
            }
        }
        for arg in args.vararg.iter().chain(&args.kwarg) {
            if let Some(annotation) = &arg.annotation {
                out.push(self.lower_expr(annotation, depth));
            }
        }
    }

    fn lower_pattern(&mut self, pattern: &ast::Pattern, depth: u32, out: &mut Vec<SyntaxNode>) {
        match pattern {
            ast::Pattern::MatchValue(p) => out.push(self.lower_expr(&p.value, depth)),
            ast::Pattern::MatchSingleton(_) | ast::Pattern::MatchStar(_) => {}
            ast::Pattern::MatchSequence(p) => {
                p.patterns.iter().for_each(|p| self.lower_pattern(p, depth, out));
            }
            ast::Pattern::MatchMapping(p) => {
                out.extend(self.lower_exprs(&p.keys, depth));
                p.patterns.iter().for_each(|p| self.lower_pattern(p, depth, out));
            }
            ast::Pattern::MatchClass(p) => {
                out.push(self.lower_expr(&p.cls, depth));
                p.patterns.iter().for_each(|p| self.lower_pattern(p, depth, out));
                p.kwd_patterns.iter().for_each(|p| self.lower_pattern(p, depth, out));
            }
            ast::Pattern::MatchAs(p) => {
                if let Some(inner) = &p.pattern {
                    self.lower_pattern(inner, depth, out);
                }
            }
            ast::Pattern::MatchOr(p) => {
                p.patterns.iter().for_each(|p| self.lower_pattern(p, depth, out));
            }
        }
    }

    fn lower_stmt(&mut self, stmt: &ast::Stmt, depth: u32, module_scope: bool) -> SyntaxNode {
        let range = stmt.range();
        let mut node;
        match stmt {
            ast::Stmt::FunctionDef(ast::StmtFunctionDef { args, body, decorator_list, returns, .. })
            | ast::Stmt::AsyncFunctionDef(ast::StmtAsyncFunctionDef {
                args, body, decorator_list, returns, ..
            }) => {
                node = self.node(NodeKind::FunctionDef, range, depth);
                node.children = self.lower_exprs(decorator_list, depth);
                self.lower_arguments(args, depth, &mut node.children);
                if let Some(returns) = returns {
                    node.children.push(self.lower_expr(returns, depth));
                }
                node.children.extend(self.lower_body(body, depth + 1, false));
            }
            ast::Stmt::ClassDef(c) => {
                node = self.node(NodeKind::ClassDef, range, depth);
                node.children = self.lower_exprs(&c.decorator_list, depth);
                node.children.extend(self.lower_exprs(&c.bases, depth));
                for kw in &c.keywords {
                    node.children.push(self.lower_expr(&kw.value, depth));
                }
                node.children.extend(self.lower_body(&c.body, depth + 1, false));
            }
            ast::Stmt::Return(r) => {
                node = self.node(NodeKind::ReturnStmt, range, depth);
                if let Some(value) = &r.value {
                    node.children.push(self.lower_expr(value, depth));
                }
            }
            ast::Stmt::Assign(a) => {
                if module_scope {
                    for target in &a.targets {
                        target_names(target, &mut self.global_names);
                    }
                }
                node = self.node(NodeKind::Assignment, range, depth);
                node.children = self.lower_exprs(&a.targets, depth);
                node.children.push(self.lower_expr(&a.value, depth));
            }
            ast::Stmt::AugAssign(a) => {
                if module_scope {
                    target_names(&a.target, &mut self.global_names);
                }
                node = self.node(NodeKind::AugAssignment, range, depth);
                node.children.push(self.lower_expr(&a.target, depth));
                node.children.push(self.lower_expr(&a.value, depth));
            }
            ast::Stmt::AnnAssign(a) => {
                if module_scope && a.value.is_some() {
                    target_names(&a.target, &mut self.global_names);
                }
                node = self.node(NodeKind::Assignment, range, depth);
                node.children.push(self.lower_expr(&a.target, depth));
                node.children.push(self.lower_expr(&a.annotation, depth));
                if let Some(value) = &a.value {
                    node.children.push(self.lower_expr(value, depth));
                }
            }
            ast::Stmt::For(ast::StmtFor { target, iter, body, orelse, .. })
            | ast::Stmt::AsyncFor(ast::StmtAsyncFor { target, iter, body, orelse, .. }) => {
                node = self.node(NodeKind::ForStmt, range, depth);
                node.children.push(self.lower_expr(target, depth));
                node.children.push(self.lower_expr(iter, depth));
                node.children.extend(self.lower_body(body, depth + 1, module_scope));
                node.children.extend(self.lower_body(orelse, depth + 1, module_scope));
            }
            ast::Stmt::While(w) => {
                node = self.node(NodeKind::WhileStmt, range, depth);
                node.children.push(self.lower_expr(&w.test, depth));
                node.children.extend(self.lower_body(&w.body, depth + 1, module_scope));
                node.children.extend(self.lower_body(&w.orelse, depth + 1, module_scope));
            }
            ast::Stmt::If(i) => {
                node = self.node(NodeKind::IfStmt, range, depth);
                node.children.push(self.lower_expr(&i.test, depth));
                node.children.extend(self.lower_body(&i.body, depth + 1, module_scope));
                // `elif` parses as a single nested if in the else branch; it
                // continues the chain at this depth rather than indenting.
                match i.orelse.as_slice() {
                    [ast::Stmt::If(_)] => {
                        node.children.push(self.lower_stmt(&i.orelse[0], depth, module_scope));
                    }
                    orelse => {
                        node.children.extend(self.lower_body(orelse, depth + 1, module_scope));
                    }
                }
            }
            ast::Stmt::With(ast::StmtWith { items, body, .. })
            | ast::Stmt::AsyncWith(ast::StmtAsyncWith { items, body, .. }) => {
                node = self.node(NodeKind::Other, range, depth);
                for item in items {
                    node.children.push(self.lower_expr(&item.context_expr, depth));
                    if let Some(vars) = &item.optional_vars {
                        node.children.push(self.lower_expr(vars, depth));
                    }
                }
                node.children.extend(self.lower_body(body, depth + 1, module_scope));
            }
            ast::Stmt::Match(m) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children.push(self.lower_expr(&m.subject, depth));
                for case in &m.cases {
                    self.lower_pattern(&case.pattern, depth + 1, &mut node.children);
                    if let Some(guard) = &case.guard {
                        node.children.push(self.lower_expr(guard, depth + 1));
                    }
                    node.children.extend(self.lower_body(&case.body, depth + 1, module_scope));
                }
            }
            ast::Stmt::Raise(r) => {
                node = self.node(NodeKind::Other, range, depth);
                for expr in r.exc.iter().chain(&r.cause) {
                    node.children.push(self.lower_expr(expr, depth));
                }
            }
            ast::Stmt::Try(ast::StmtTry { body, handlers, orelse, finalbody, .. })
            | ast::Stmt::TryStar(ast::StmtTryStar { body, handlers, orelse, finalbody, .. }) => {
                node = self.node(NodeKind::TryStmt, range, depth);
                node.children.extend(self.lower_body(body, depth + 1, module_scope));
                for handler in handlers {
                    let ast::ExceptHandler::ExceptHandler(h) = handler;
                    if let Some(type_) = &h.type_ {
                        node.children.push(self.lower_expr(type_, depth + 1));
                    }
                    node.children.extend(self.lower_body(&h.body, depth + 1, module_scope));
                }
                node.children.extend(self.lower_body(orelse, depth + 1, module_scope));
                node.children.extend(self.lower_body(finalbody, depth + 1, module_scope));
            }
            ast::Stmt::Assert(a) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children.push(self.lower_expr(&a.test, depth));
                if let Some(msg) = &a.msg {
                    node.children.push(self.lower_expr(msg, depth));
                }
            }
            ast::Stmt::Import(_) | ast::Stmt::ImportFrom(_) => {
                node = self.node(NodeKind::ImportStmt, range, depth);
            }
            ast::Stmt::Global(g) => {
                for name in &g.names {
                    self.global_names.insert(name.to_string());
                }
                node = self.node(NodeKind::GlobalDecl, range, depth);
            }
            ast::Stmt::Delete(d) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children = self.lower_exprs(&d.targets, depth);
            }
            ast::Stmt::TypeAlias(t) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children.push(self.lower_expr(&t.name, depth));
                node.children.push(self.lower_expr(&t.value, depth));
            }
            ast::Stmt::Expr(e) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children.push(self.lower_expr(&e.value, depth));
            }
            ast::Stmt::Pass(_) => node = self.node(NodeKind::PassStmt, range, depth),
            ast::Stmt::Break(_) => node = self.node(NodeKind::BreakStmt, range, depth),
            ast::Stmt::Continue(_) => node = self.node(NodeKind::ContinueStmt, range, depth),
            ast::Stmt::Nonlocal(_) => node = self.node(NodeKind::Other, range, depth),
        }
        self.finish(node)
    }

    fn lower_expr(&mut self, expr: &ast::Expr, depth: u32) -> SyntaxNode {
        let range = expr.range();
        let mut node;
        match expr {
            ast::Expr::BoolOp(e) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children = self.lower_exprs(&e.values, depth);
            }
            ast::Expr::NamedExpr(e) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children.push(self.lower_expr(&e.target, depth));
                node.children.push(self.lower_expr(&e.value, depth));
            }
            ast::Expr::BinOp(e) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children.push(self.lower_expr(&e.left, depth));
                node.children.push(self.lower_expr(&e.right, depth));
            }
            ast::Expr::UnaryOp(e) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children.push(self.lower_expr(&e.operand, depth));
            }
            ast::Expr::Lambda(e) => {
                // not a user-defined function for feature purposes
                node = self.node(NodeKind::Other, range, depth);
                self.lower_arguments(&e.args, depth, &mut node.children);
                node.children.push(self.lower_expr(&e.body, depth));
            }
            ast::Expr::IfExp(e) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children.push(self.lower_expr(&e.test, depth));
                node.children.push(self.lower_expr(&e.body, depth));
                node.children.push(self.lower_expr(&e.orelse, depth));
            }
            ast::Expr::Dict(e) => {
                node = self.node(NodeKind::Other, range, depth);
                for key in e.keys.iter().flatten() {
                    node.children.push(self.lower_expr(key, depth));
                }
                node.children.extend(self.lower_exprs(&e.values, depth));
            }
            ast::Expr::Set(e) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children = self.lower_exprs(&e.elts, depth);
            }
            ast::Expr::ListComp(ast::ExprListComp { elt, generators, .. })
            | ast::Expr::SetComp(ast::ExprSetComp { elt, generators, .. })
            | ast::Expr::GeneratorExp(ast::ExprGeneratorExp { elt, generators, .. }) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children.push(self.lower_expr(elt, depth));
                for comp in generators {
                    node.children.push(self.lower_expr(&comp.target, depth));
                    node.children.push(self.lower_expr(&comp.iter, depth));
                    node.children.extend(self.lower_exprs(&comp.ifs, depth));
                }
            }
            ast::Expr::DictComp(e) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children.push(self.lower_expr(&e.key, depth));
                node.children.push(self.lower_expr(&e.value, depth));
                for comp in &e.generators {
                    node.children.push(self.lower_expr(&comp.target, depth));
                    node.children.push(self.lower_expr(&comp.iter, depth));
                    node.children.extend(self.lower_exprs(&comp.ifs, depth));
                }
            }
            ast::Expr::Await(e) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children.push(self.lower_expr(&e.value, depth));
            }
            ast::Expr::Yield(e) => {
                node = self.node(NodeKind::Other, range, depth);
                if let Some(value) = &e.value {
                    node.children.push(self.lower_expr(value, depth));
                }
            }
            ast::Expr::YieldFrom(e) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children.push(self.lower_expr(&e.value, depth));
            }
            ast::Expr::Compare(e) => {
                // a chained comparison is a single node
                node = self.node(NodeKind::Comparison, range, depth);
                node.children.push(self.lower_expr(&e.left, depth));
                node.children.extend(self.lower_exprs(&e.comparators, depth));
            }
            ast::Expr::Call(e) => {
                node = self.node(NodeKind::Call, range, depth);
                node.children.push(self.lower_expr(&e.func, depth));
                node.children.extend(self.lower_exprs(&e.args, depth));
                for kw in &e.keywords {
                    node.children.push(self.lower_expr(&kw.value, depth));
                }
            }
            ast::Expr::FormattedValue(e) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children.push(self.lower_expr(&e.value, depth));
                if let Some(spec) = &e.format_spec {
                    node.children.push(self.lower_expr(spec, depth));
                }
            }
            ast::Expr::JoinedStr(e) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children = self.lower_exprs(&e.values, depth);
            }
            ast::Expr::Constant(e) => {
                let (kind, int_value) = literal_kind(&e.value);
                node = self.node(NodeKind::Literal(kind), range, depth);
                node.int_value = int_value;
            }
            ast::Expr::Attribute(e) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children.push(self.lower_expr(&e.value, depth));
            }
            ast::Expr::Subscript(e) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children.push(self.lower_expr(&e.value, depth));
                node.children.push(self.lower_expr(&e.slice, depth));
            }
            ast::Expr::Starred(e) => {
                node = self.node(NodeKind::Other, range, depth);
                node.children.push(self.lower_expr(&e.value, depth));
            }
            ast::Expr::Name(_) => node = self.node(NodeKind::Name, range, depth),
            ast::Expr::List(e) => {
                node = self.node(NodeKind::ListDisplay, range, depth);
                node.children = self.lower_exprs(&e.elts, depth);
            }
            ast::Expr::Tuple(e) => {
                node = self.node(NodeKind::TupleDisplay, range, depth);
                node.children = self.lower_exprs(&e.elts, depth);
            }
            ast::Expr::Slice(e) => {
                node = self.node(NodeKind::Other, range, depth);
                for part in e.lower.iter().chain(&e.upper).chain(&e.step) {
                    node.children.push(self.lower_expr(part, depth));
                }
            }
        }
        self.finish(node)
    }
}

fn count_comments(text: &str) -> usize {
    lexer::lex(text, Mode::Module)
        .filter(|r| matches!(r, Ok((Tok::Comment(_), _))))
        .count()
}

fn count_blank_lines(text: &str) -> usize {
    text.lines().filter(|l| l.trim().is_empty()).count()
}

fn count_whitespace_chars(text: &str) -> usize {
    text.chars().filter(|c| matches!(c, ' ' | '\t' | '\n' | '\r')).count()
}

/// Parse source text into the lowered tree plus the token-level counts.
pub fn parse_program(source: &SourceProgram) -> Result<ProgramSyntax, PySyntaxError> {
    let text = source.source_text.as_str();
    let index = LineIndex::new(text);
    let suite = rustpython_parser::parse(text, Mode::Module, "<submission>").map_err(|e| {
        PySyntaxError {
            line: index.line_of(e.offset.to_usize()).max(1) as usize,
            message: e.error.to_string(),
        }
    })?;
    let ast::Mod::Module(module) = suite else {
        unreachable!("Mode::Module always produces a module");
    };

    let mut lowering = Lowering { index: &index, global_names: BTreeSet::new() };
    let mut root = SyntaxNode::new(NodeKind::Module, 1, 1, 0);
    root.children = lowering.lower_body(&module.body, 0, true);
    let root = lowering.finish(root);

    Ok(ProgramSyntax {
        tree: root,
        comment_count: count_comments(text),
        blank_line_count: count_blank_lines(text),
        whitespace_char_count: count_whitespace_chars(text),
        distinct_global_count: lowering.global_names.len(),
    })
}

/// Convenience: text in, `(syntax, source)` out.
pub fn parse_text(text: &str) -> Result<(ProgramSyntax, SourceProgram), PySyntaxError> {
    let source = SourceProgram::from_text(text.to_string());
    let syntax = parse_program(&source)?;
    Ok((syntax, source))
}
