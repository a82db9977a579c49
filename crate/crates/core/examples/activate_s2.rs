//! Walks the bundled 5-state set in C^3 ⊗ C^6 through discrimination and
//! activation, printing each result.

use opsets_core::{
    classify_completeness, corpus, is_activable, render_tiling, search_protocol, TilingFormat,
    DEFAULT_MAX_DEPTH,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = corpus::s2();
    print!("{}", render_tiling(&s, TilingFormat::Ascii, None)?);
    println!("completeness: {}", classify_completeness(&s)?.tag.as_str());

    let v = search_protocol(&s, DEFAULT_MAX_DEPTH)?;
    println!(
        "discrimination: {} (depth {})",
        v.verdict.as_str(),
        v.depth_used
    );

    let a = is_activable(&s, DEFAULT_MAX_DEPTH)?;
    println!("activation: {}", a.label());
    if let Some(w) = a.witness() {
        for step in &w.steps {
            let ranks: Vec<usize> = step.pvm.elements().iter().map(|p| p.rank()).collect();
            println!(
                "  party {} measures ranks {:?}, keeps outcome {}",
                step.party + 1,
                ranks,
                step.outcome
            );
        }
        println!(
            "  terminal: {:?} ({})",
            w.terminal.labels(),
            w.terminal_property.as_str()
        );
        print!("{}", render_tiling(&w.terminal, TilingFormat::Ascii, None)?);
    }
    Ok(())
}
