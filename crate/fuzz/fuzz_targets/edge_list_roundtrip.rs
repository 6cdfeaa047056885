#![no_main]

use libfuzzer_sys::fuzz_target;
use ugraph_cluster::parse_graph;

mod limits;

// Anything that parses must re-emit to a canonical form that parses back to
// the same graph and re-emits byte-identically.
fuzz_target!(|data: &str| {
    if !limits::declared_nodes_ok(data) {
        return;
    }
    let Ok(g) = parse_graph(data) else { return };
    let text = g.to_edge_list();
    let again = parse_graph(&text).expect("canonical edge list parses");
    assert_eq!(again.to_edge_list(), text);
    assert_eq!(again.fingerprint(), g.fingerprint());
});
