//! Proof search with the splitting rule, induction on n, and certificate replay.

use chowsec::inductor::{
    extend_n, verify_certificate, BasePolicy, Certificate, CertificateFile, Prover, ProverConfig,
};
use chowsec::terracini::Statement;

fn print_tree(c: &Certificate, depth: usize) {
    let extra = match (&c.splitting, &c.evidence) {
        (Some(sp), _) => format!(
            " s'={} t'={} u'={} v'={}",
            sp.s[0], sp.t[0], sp.u[0], sp.v[0]
        ),
        (_, Some(ev)) => format!(" rank={} ({}x{})", ev.rank, ev.rows, ev.cols),
        _ => String::new(),
    };
    println!("{}{} {}{extra}", "  ".repeat(depth), c.statement, c.method);
    for child in &c.children {
        print_tree(child, depth + 1);
    }
}

fn main() {
    // only three-variable statements may be checked directly, so the search has to split
    let config = ProverConfig {
        policy: BasePolicy::up_to_n(3),
        ..ProverConfig::default()
    };
    let mut prover = Prover::new(config);
    for t in [[4, 3, 2, 0, 0, 0], [5, 3, 3, 0, 0, 0], [4, 4, 3, 0, 0, 0]] {
        let st = Statement::try_from(t).unwrap();
        match prover.prove(&st) {
            Ok(cert) => {
                print_tree(&cert, 0);
                verify_certificate(&cert).unwrap();
            }
            Err(e) => println!("{st}: {e}"),
        }
    }
    println!("{:?}", prover.stats());

    let chain = extend_n(3, 3, 2, 8, ProverConfig::default()).unwrap();
    println!(
        "chain for {}: {} nodes",
        chain.statement,
        chain.node_count()
    );
    let file = CertificateFile::new(chain, config.prime, config.root_seed);
    let json = file.to_json();
    let back = CertificateFile::from_json(&json).unwrap();
    back.verify().unwrap();
    println!(
        "round-tripped {} bytes of JSON and replayed every rank",
        json.len()
    );

    let mut broken = back.tree.clone();
    broken.node_mut("root/0").unwrap().statement = Statement::secant(7, 3, 1).unwrap();
    println!(
        "corrupted copy: {}",
        verify_certificate(&broken).unwrap_err()
    );
}
