//! Report trees shared by the text, JSON and LaTeX emitters.

use dox_core::exact_linalg::{Scalar, Tensor};

/// One report value. Maps keep insertion order so output is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// A check outcome.
    Bool(bool),
    /// An informational yes/no fact, not a check.
    Flag(bool),
    Int(usize),
    Str(String),
    Scalar(Scalar),
    Tensor(Tensor),
    Column(Vec<Tensor>),
    Matrix(Vec<Vec<Scalar>>),
    List(Vec<Node>),
    Map(Vec<(String, Node)>),
}

impl Node {
    pub fn map() -> MapBuilder {
        MapBuilder(Vec::new())
    }

    pub fn ints(v: &[usize]) -> Node {
        Node::List(v.iter().map(|&x| Node::Int(x)).collect())
    }

    pub fn get(&self, key: &str) -> Option<&Node> {
        match self {
            Node::Map(m) => m.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    /// Looks up a `/`-separated path of map keys.
    pub fn path(&self, path: &str) -> Option<&Node> {
        path.split('/').try_fold(self, |n, k| n.get(k))
    }

    /// All boolean leaves whose key names a check, with their paths.
    pub fn checks(&self) -> Vec<(String, bool)> {
        let mut out = Vec::new();
        collect_checks(self, "", &mut out);
        out
    }
}

fn collect_checks(n: &Node, prefix: &str, out: &mut Vec<(String, bool)>) {
    match n {
        Node::Map(m) => {
            for (k, v) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}/{k}") };
                if let Node::Bool(b) = v {
                    out.push((p, *b));
                } else {
                    collect_checks(v, &p, out);
                }
            }
        }
        Node::List(items) => {
            for (i, v) in items.iter().enumerate() {
                collect_checks(v, &format!("{prefix}/{i}"), out);
            }
        }
        _ => {}
    }
}

pub struct MapBuilder(Vec<(String, Node)>);

impl MapBuilder {
    pub fn add(mut self, key: &str, v: impl Into<Node>) -> Self {
        self.0.push((key.to_string(), v.into()));
        self
    }

    pub fn push(&mut self, key: &str, v: impl Into<Node>) {
        self.0.push((key.to_string(), v.into()));
    }

    pub fn build(self) -> Node {
        Node::Map(self.0)
    }
}

impl From<MapBuilder> for Node {
    fn from(b: MapBuilder) -> Node {
        b.build()
    }
}

impl From<bool> for Node {
    fn from(b: bool) -> Node {
        Node::Bool(b)
    }
}

impl From<usize> for Node {
    fn from(v: usize) -> Node {
        Node::Int(v)
    }
}

impl From<&str> for Node {
    fn from(s: &str) -> Node {
        Node::Str(s.to_string())
    }
}

impl From<String> for Node {
    fn from(s: String) -> Node {
        Node::Str(s)
    }
}

impl From<Scalar> for Node {
    fn from(s: Scalar) -> Node {
        Node::Scalar(s)
    }
}

impl From<Tensor> for Node {
    fn from(t: Tensor) -> Node {
        Node::Tensor(t)
    }
}

impl From<Vec<Vec<Scalar>>> for Node {
    fn from(m: Vec<Vec<Scalar>>) -> Node {
        Node::Matrix(m)
    }
}

impl From<Vec<Node>> for Node {
    fn from(v: Vec<Node>) -> Node {
        Node::List(v)
    }
}
