//! Print the built-in surface registry as a markdown table.

use manin::surfaces::{builtin, BUILTIN_IDS};

fn main() -> anyhow::Result<()> {
    println!("| id | degree | P^n | equations | excluded lines | Picard rank |");
    println!("|---|---|---|---|---|---|");
    for id in BUILTIN_IDS {
        let s = builtin(id)?;
        let eqs: Vec<String> = s.forms.iter().map(|f| format!("`{f} = 0`")).collect();
        let lines = match &s.lines {
            Some(l) => l.len().to_string(),
            None => "not listed".into(),
        };
        let rank = s.picard_rank.map_or("-".into(), |r| r.to_string());
        println!(
            "| `{id}` | {} | {} | {} | {lines} | {rank} |",
            s.degree,
            s.nvars - 1,
            eqs.join("<br>")
        );
    }
    Ok(())
}
