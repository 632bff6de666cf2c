//! Reader for a small DOT subset: node `pos`/`width`/`height`/`label`
//! attributes and plain edges. Everything else is skipped with a warning.

use std::collections::HashMap;

use crate::graph::{EdgeDoc, GraphDocument, GraphError, NodeDoc, Warning};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Quoted(String),
    Sym(char),
    Arrow,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, message: impl Into<String>) -> GraphError {
        GraphError::Malformed {
            message: message.into(),
            line: self.line,
            column: self.col,
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = *self.src.get(self.pos)?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'/') if self.src.get(self.pos + 1) == Some(&b'/') => {
                    while !matches!(self.peek(), None | Some(b'\n')) {
                        self.bump();
                    }
                }
                Some(b'#') => {
                    while !matches!(self.peek(), None | Some(b'\n')) {
                        self.bump();
                    }
                }
                Some(b'/') if self.src.get(self.pos + 1) == Some(&b'*') => {
                    self.bump();
                    self.bump();
                    while self.peek().is_some()
                        && !(self.peek() == Some(b'*') && self.src.get(self.pos + 1) == Some(&b'/'))
                    {
                        self.bump();
                    }
                    self.bump();
                    self.bump();
                }
                _ => return,
            }
        }
    }

    fn next(&mut self) -> Result<Option<(Tok, usize, usize)>, GraphError> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let tok = match c {
            b'"' => {
                self.bump();
                let mut s = Vec::new();
                loop {
                    match self.bump() {
                        None => return Err(self.err("unterminated string")),
                        Some(b'"') => break,
                        Some(b'\\') => match self.bump() {
                            Some(b'"') => s.push(b'"'),
                            Some(b'\n') => {}
                            Some(other) => {
                                s.push(b'\\');
                                s.push(other);
                            }
                            None => return Err(self.err("unterminated string")),
                        },
                        Some(other) => s.push(other),
                    }
                }
                Tok::Quoted(String::from_utf8(s).map_err(|_| self.err("invalid UTF-8"))?)
            }
            b'-' if matches!(self.src.get(self.pos + 1), Some(b'-') | Some(b'>')) => {
                self.bump();
                self.bump();
                Tok::Arrow
            }
            c if c.is_ascii_alphanumeric() || c == b'_' || c == b'.' || c == b'-' || c >= 0x80 => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_' || c == b'.' || c >= 0x80)
                    || (self.peek() == Some(b'-') && self.pos == start)
                {
                    self.bump();
                }
                let text = std::str::from_utf8(&self.src[start..self.pos])
                    .map_err(|_| self.err("invalid UTF-8"))?;
                Tok::Ident(text.to_string())
            }
            b'{' | b'}' | b'[' | b']' | b';' | b',' | b'=' | b':' => {
                self.bump();
                Tok::Sym(c as char)
            }
            other => return Err(self.err(format!("unexpected character {:?}", other as char))),
        };
        Ok(Some((tok, line, col)))
    }
}

#[derive(Default)]
struct PendingNode {
    pos: Option<(f64, f64)>,
    width: Option<f64>,
    height: Option<f64>,
    label: Option<String>,
}

pub(crate) fn parse_dot(bytes: &[u8]) -> Result<(GraphDocument, Vec<Warning>), GraphError> {
    let mut lx = Lexer {
        src: bytes,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut toks = Vec::new();
    while let Some(t) = lx.next()? {
        toks.push(t);
    }
    let mut warnings = Vec::new();
    let mut order: Vec<String> = Vec::new();
    let mut nodes: HashMap<String, PendingNode> = HashMap::new();
    let mut edges: Vec<EdgeDoc> = Vec::new();

    let malformed = |msg: &str, at: Option<&(Tok, usize, usize)>| GraphError::Malformed {
        message: msg.to_string(),
        line: at.map_or(lx.line, |t| t.1),
        column: at.map_or(lx.col, |t| t.2),
    };

    let mut i = 0;
    // Header: [strict] (graph|digraph) [name] {
    while i < toks.len() && toks[i].0 != Tok::Sym('{') {
        i += 1;
    }
    if i == toks.len() {
        return Err(malformed("expected '{'", toks.last()));
    }
    i += 1;

    let id_of = |t: &Tok| match t {
        Tok::Ident(s) | Tok::Quoted(s) => Some(s.clone()),
        _ => None,
    };

    while i < toks.len() {
        match &toks[i].0 {
            Tok::Sym('}') => break,
            Tok::Sym(';') | Tok::Sym(',') => {
                i += 1;
                continue;
            }
            _ => {}
        }
        let Some(first) = id_of(&toks[i].0) else {
            return Err(malformed("expected a statement", toks.get(i)));
        };
        let stmt_at = (toks[i].1, toks[i].2);
        i += 1;
        // Skip `node:port` suffixes.
        while i + 1 < toks.len() && toks[i].0 == Tok::Sym(':') {
            i += 2;
        }
        let mut chain = vec![first.clone()];
        while i < toks.len() && toks[i].0 == Tok::Arrow {
            i += 1;
            let Some(next) = toks.get(i).and_then(|t| id_of(&t.0)) else {
                return Err(malformed("expected node id after edge operator", toks.get(i)));
            };
            chain.push(next);
            i += 1;
            while i + 1 < toks.len() && toks[i].0 == Tok::Sym(':') {
                i += 2;
            }
        }
        let mut attrs: Vec<(String, String)> = Vec::new();
        let mut assignment = None;
        if i < toks.len() && toks[i].0 == Tok::Sym('=') {
            // Graph-level `key = value`.
            assignment = toks.get(i + 1).and_then(|t| id_of(&t.0));
            i += 2;
        }
        while i < toks.len() && toks[i].0 == Tok::Sym('[') {
            i += 1;
            while i < toks.len() && toks[i].0 != Tok::Sym(']') {
                if matches!(toks[i].0, Tok::Sym(',') | Tok::Sym(';')) {
                    i += 1;
                    continue;
                }
                let Some(key) = id_of(&toks[i].0) else {
                    return Err(malformed("expected attribute name", toks.get(i)));
                };
                i += 1;
                let mut value = String::new();
                if i < toks.len() && toks[i].0 == Tok::Sym('=') {
                    value = toks
                        .get(i + 1)
                        .and_then(|t| id_of(&t.0))
                        .ok_or_else(|| malformed("expected attribute value", toks.get(i + 1)))?;
                    i += 2;
                }
                attrs.push((key, value));
            }
            if i == toks.len() {
                return Err(malformed("unterminated attribute list", toks.last()));
            }
            i += 1;
        }
        if assignment.is_some() {
            warnings.push(Warning {
                message: format!("line {}: ignoring graph attribute {first:?}", stmt_at.0),
            });
            continue;
        }
        if chain.len() == 1 {
            if matches!(first.as_str(), "graph" | "node" | "edge") {
                warnings.push(Warning {
                    message: format!("line {}: ignoring default {first} attributes", stmt_at.0),
                });
                continue;
            }
            let entry = nodes.entry(first.clone()).or_insert_with(|| {
                order.push(first.clone());
                PendingNode::default()
            });
            for (k, v) in attrs {
                let num = |v: &str| -> Result<f64, GraphError> {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| GraphError::Malformed {
                            message: format!("attribute {k} of {first:?} is not a number: {v:?}"),
                            line: stmt_at.0,
                            column: stmt_at.1,
                        })
                };
                match k.as_str() {
                    "pos" => {
                        let v = v.trim_end_matches('!');
                        let mut it = v.split(',');
                        let (Some(x), Some(y)) = (it.next(), it.next()) else {
                            return Err(GraphError::Malformed {
                                message: format!("pos of {first:?} must be \"x,y\""),
                                line: stmt_at.0,
                                column: stmt_at.1,
                            });
                        };
                        entry.pos = Some((num(x)?, num(y)?));
                    }
                    "width" => entry.width = Some(num(&v)?),
                    "height" => entry.height = Some(num(&v)?),
                    "label" => entry.label = Some(v),
                    other => warnings.push(Warning {
                        message: format!("line {}: ignoring node attribute {other:?}", stmt_at.0),
                    }),
                }
            }
        } else {
            let mut label = None;
            for (k, v) in attrs {
                if k == "label" {
                    label = Some(v);
                } else {
                    warnings.push(Warning {
                        message: format!("line {}: ignoring edge attribute {k:?}", stmt_at.0),
                    });
                }
            }
            for w in chain.windows(2) {
                edges.push(EdgeDoc {
                    source: w[0].clone(),
                    target: w[1].clone(),
                    label: label.clone(),
                });
            }
        }
    }

    let mut doc_nodes = Vec::with_capacity(order.len());
    for id in order {
        let n = nodes.remove(&id).expect("ordered ids are present");
        let Some((x, y)) = n.pos else {
            return Err(GraphError::Malformed {
                message: format!("node {id:?} has no pos attribute"),
                line: 0,
                column: 0,
            });
        };
        doc_nodes.push(NodeDoc {
            id,
            x,
            y,
            width: n.width,
            height: n.height,
            label: n.label,
        });
    }
    Ok((
        GraphDocument {
            nodes: doc_nodes,
            edges,
        },
        warnings,
    ))
}
