#![no_main]

use libfuzzer_sys::fuzz_target;

mod limits;

fuzz_target!(|data: &str| {
    if !limits::declared_nodes_ok(data) {
        return;
    }
    // Errors are fine; panics are not.
    let _ = ugraph_cluster::parse_graph(data);
});
