//! The 3x3 structure lemma: matchings, covers, templates.

use sunflower_core::graphs::{
    classify, graph_stats, max_matching, min_vertex_cover, verify_structure_lemma, PetalGraph,
    Template,
};

fn main() -> sunflower_core::Result<()> {
    for t in [Template::G1, Template::G2, Template::G3] {
        let s = graph_stats(&t.graph())?;
        println!(
            "{}: m2={} t={} nu={} tau={}",
            t.name(),
            s.m2,
            s.t,
            s.matching_number,
            s.cover_size
        );
    }
    let g: PetalGraph = "010/101/000".parse()?;
    println!(
        "{g}\nmatching {:?}, cover {:?}, embeds into {:?}",
        max_matching(&g).pairs,
        min_vertex_cover(&g),
        classify(&g)?
    );
    let r = verify_structure_lemma();
    println!(
        "{} graphs scanned, {} qualifying, max m2+t = {}, passed {}",
        r.graphs_scanned,
        r.qualifying,
        r.max_stat,
        r.passed()
    );
    Ok(())
}
