//! graph6 and edge-list JSON interchange.
//!
//! graph6 stores the upper triangle of the adjacency matrix column by column
//! (`x(0,1), x(0,2), x(1,2), x(0,3), ..`), packed big-endian six bits per
//! byte with each byte offset by 63 and the last byte zero-padded. Orders up
//! to 62 use the single header byte `63 + n`; 63 and 64 use the `'~'` header
//! followed by an 18-bit order.

use crate::graph::Graph;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty input")]
    Empty,
    #[error("invalid header byte 0x{0:02x}")]
    InvalidHeader(u8),
    #[error("graph order {0} outside supported range 1..=64")]
    UnsupportedOrder(usize),
    #[error("truncated bit field: expected {expected} data bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("{0} trailing bytes after the bit field")]
    TrailingGarbage(usize),
    #[error("byte 0x{byte:02x} at offset {offset} outside the graph6 alphabet")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("nonzero padding bits in the final data byte")]
    NonzeroPadding,
}

const OFFSET: u8 = 63;
const LONG_HEADER: u8 = 126; // '~'

fn data_byte(bytes: &[u8], offset: usize) -> Result<u8, Graph6Error> {
    let b = bytes[offset];
    if !(OFFSET..=LONG_HEADER).contains(&b) {
        return Err(Graph6Error::InvalidByte { offset, byte: b });
    }
    Ok(b - OFFSET)
}

/// Parses a graph6 byte string. The encoding must be exact: no surrounding
/// whitespace, no trailing bytes, zero padding bits.
pub fn parse_graph6(input: &[u8]) -> Result<Graph, Graph6Error> {
    if input.is_empty() {
        return Err(Graph6Error::Empty);
    }
    let (n, header_len) = if input[0] == LONG_HEADER {
        if input.len() >= 2 && input[1] == LONG_HEADER {
            // the 8-byte form only encodes orders >= 258048
            return Err(Graph6Error::UnsupportedOrder(258_048));
        }
        if input.len() < 4 {
            return Err(Graph6Error::Truncated {
                expected: 3,
                found: input.len() - 1,
            });
        }
        let n = ((data_byte(input, 1)? as usize) << 12)
            | ((data_byte(input, 2)? as usize) << 6)
            | data_byte(input, 3)? as usize;
        (n, 4)
    } else if input[0] >= OFFSET && input[0] < LONG_HEADER {
        ((input[0] - OFFSET) as usize, 1)
    } else {
        return Err(Graph6Error::InvalidHeader(input[0]));
    };

    if !(1..=64).contains(&n) {
        return Err(Graph6Error::UnsupportedOrder(n));
    }

    let bit_count = n * (n - 1) / 2;
    let expected = bit_count.div_ceil(6);
    let found = input.len() - header_len;
    if found < expected {
        return Err(Graph6Error::Truncated { expected, found });
    }
    if found > expected {
        return Err(Graph6Error::TrailingGarbage(found - expected));
    }

    let mut g = Graph::new(n);
    let mut k = 0usize;
    for col in 1..n {
        for row in 0..col {
            let byte = data_byte(input, header_len + k / 6)?;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(row, col);
            }
            k += 1;
        }
    }
    if bit_count % 6 != 0 {
        let last = data_byte(input, header_len + expected - 1)?;
        let pad = 6 - bit_count % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(Graph6Error::NonzeroPadding);
        }
    }
    Ok(g)
}

/// Canonical graph6 encoding; `parse_graph6(emit_graph6(g)) == g` bit-exactly.
pub fn emit_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(OFFSET + n as u8);
    } else {
        out.push(LONG_HEADER);
        out.push(OFFSET + ((n >> 12) & 0x3f) as u8);
        out.push(OFFSET + ((n >> 6) & 0x3f) as u8);
        out.push(OFFSET + (n & 0x3f) as u8);
    }
    let mut acc = 0u8;
    let mut filled = 0u8;
    for col in 1..n {
        for row in 0..col {
            acc = acc << 1 | u8::from(g.has_edge(row, col));
            filled += 1;
            if filled == 6 {
                out.push(OFFSET + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(OFFSET + (acc << (6 - filled)));
    }
    String::from_utf8(out).expect("graph6 alphabet is ASCII")
}

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("graph order {0} outside supported range 1..=64")]
    UnsupportedOrder(usize),
    #[error("edge endpoint {vertex} out of range for order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge [{0}, {1}]")]
    DuplicateEdge(usize, usize),
}

/// The edge-list JSON form `{"n": int, "edges": [[u, v], ..]}`.
///
/// Emission is canonical: `u < v`, edges sorted lexicographically. Parsing
/// accepts endpoints in either order but rejects loops and duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl EdgeList {
    pub fn from_graph(g: &Graph) -> EdgeList {
        let mut edges = Vec::with_capacity(g.edge_count());
        for u in 0..g.n() {
            for v in g.neighbourhood(u) {
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        EdgeList { n: g.n(), edges }
    }

    pub fn to_graph(&self) -> Result<Graph, EdgeListError> {
        if !(1..=64).contains(&self.n) {
            return Err(EdgeListError::UnsupportedOrder(self.n));
        }
        let mut g = Graph::new(self.n);
        for &(u, v) in &self.edges {
            if u >= self.n {
                return Err(EdgeListError::VertexOutOfRange { vertex: u, n: self.n });
            }
            if v >= self.n {
                return Err(EdgeListError::VertexOutOfRange { vertex: v, n: self.n });
            }
            if u == v {
                return Err(EdgeListError::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                return Err(EdgeListError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }
}

pub fn parse_edge_list_json(text: &str) -> Result<Graph, EdgeListError> {
    let list: EdgeList = serde_json::from_str(text)?;
    list.to_graph()
}

pub fn emit_edge_list_json(g: &Graph) -> String {
    serde_json::to_string(&EdgeList::from_graph(g)).expect("edge list serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_known_strings() {
        // 'D' = 5 vertices, '?' = 000000, '{' = 111100:
        // upper-triangle order makes that the star into vertex 4
        let g = parse_graph6(b"D?{").unwrap();
        assert_eq!(g.n(), 5);
        let mut edges = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                if g.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        assert_eq!(edges, vec![(0, 4), (1, 4), (2, 4), (3, 4)]);
        assert_eq!(emit_graph6(&g), "D?{");

        // one bit of upper triangle: K2
        let k2 = parse_graph6(b"A_").unwrap();
        assert_eq!(k2.n(), 2);
        assert!(k2.has_edge(0, 1));
    }

    #[test]
    fn roundtrip_paley5() {
        let g = Graph::paley(5).unwrap();
        let text = emit_graph6(&g);
        let back = parse_graph6(text.as_bytes()).unwrap();
        assert_eq!(back.n(), 5);
        for u in 0..5 {
            assert_eq!(back.neighbourhood(u), g.neighbourhood(u));
        }
    }

    #[test]
    fn roundtrip_order_63_and_64() {
        for n in [63usize, 64] {
            let mut g = Graph::new(n);
            g.add_edge(0, n - 1);
            g.add_edge(5, 7);
            let text = emit_graph6(&g);
            assert_eq!(text.as_bytes()[0], b'~');
            let back = parse_graph6(text.as_bytes()).unwrap();
            assert_eq!(back.n(), n);
            assert!(back.has_edge(0, n - 1) && back.has_edge(5, 7));
            assert_eq!(back.edge_count(), 2);
        }
    }

    #[test]
    fn distinct_parse_errors() {
        assert_eq!(parse_graph6(b""), Err(Graph6Error::Empty));
        assert_eq!(parse_graph6(b">"), Err(Graph6Error::InvalidHeader(b'>')));
        assert_eq!(
            parse_graph6(b"D?"),
            Err(Graph6Error::Truncated { expected: 2, found: 1 })
        );
        assert_eq!(parse_graph6(b"A_?"), Err(Graph6Error::TrailingGarbage(1)));
        assert_eq!(parse_graph6(b"?"), Err(Graph6Error::UnsupportedOrder(0)));
        // 'A' needs one data byte; 0x20 is below the alphabet
        assert_eq!(
            parse_graph6(b"A "),
            Err(Graph6Error::InvalidByte { offset: 1, byte: b' ' })
        );
        // K2 with a nonzero padding bit: '`' = 100001
        assert_eq!(parse_graph6(b"A`"), Err(Graph6Error::NonzeroPadding));
    }

    #[test]
    fn edge_list_roundtrip_and_errors() {
        let g = Graph::cycle(4);
        let json = emit_edge_list_json(&g);
        assert_eq!(json, r#"{"n":4,"edges":[[0,1],[0,3],[1,2],[2,3]]}"#);
        let back = parse_edge_list_json(&json).unwrap();
        assert_eq!(EdgeList::from_graph(&back), EdgeList::from_graph(&g));

        assert!(matches!(
            parse_edge_list_json(r#"{"n":3,"edges":[[0,0]]}"#),
            Err(EdgeListError::SelfLoop(0))
        ));
        assert!(matches!(
            parse_edge_list_json(r#"{"n":3,"edges":[[0,5]]}"#),
            Err(EdgeListError::VertexOutOfRange { vertex: 5, n: 3 })
        ));
        assert!(matches!(
            parse_edge_list_json(r#"{"n":3,"edges":[[0,1],[1,0]]}"#),
            Err(EdgeListError::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            parse_edge_list_json(r#"{"n":0,"edges":[]}"#),
            Err(EdgeListError::UnsupportedOrder(0))
        ));
        assert!(matches!(
            parse_edge_list_json("not json"),
            Err(EdgeListError::Json(_))
        ));
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n)
            .prop_flat_map(|n| {
                let m = n * (n - 1) / 2;
                (Just(n), proptest::collection::vec(any::<bool>(), m))
            })
            .prop_map(|(n, bits)| {
                let mut g = Graph::new(n);
                let mut i = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[i] {
                            g.add_edge(u, v);
                        }
                        i += 1;
                    }
                }
                g
            })
    }

    proptest! {
        #[test]
        fn graph6_roundtrip(g in arb_graph(40)) {
            let text = emit_graph6(&g);
            let back = parse_graph6(text.as_bytes()).unwrap();
            prop_assert_eq!(back.n(), g.n());
            for v in 0..g.n() {
                prop_assert_eq!(back.neighbourhood(v), g.neighbourhood(v));
            }
            prop_assert_eq!(emit_graph6(&back), text);
        }

        #[test]
        fn edge_list_roundtrip(g in arb_graph(20)) {
            let back = parse_edge_list_json(&emit_edge_list_json(&g)).unwrap();
            for v in 0..g.n() {
                prop_assert_eq!(back.neighbourhood(v), g.neighbourhood(v));
            }
        }
    }
}
