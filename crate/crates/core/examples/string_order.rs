//! String order of the AKLT chain against its closed form, the transfer
//! spectrum, and the win-probability bound it implies.

use spto::group::GroupElement;
use spto::mps::order::{
    aklt_string_order_closed_form, aklt_string_order_limit, aklt_win_probability_limit,
};
use spto::mps::transfer::spectrum;
use spto::mps::{
    builtin_tensor, correlation_length, string_order, twisted_string_order, win_probability_bound,
    Normalization,
};

fn main() -> spto::Result<()> {
    let aklt = builtin_tensor("aklt")?;
    let z = GroupElement::z2z2(1, 0);
    let x = GroupElement::z2z2(0, 1);
    let bounds = aklt.boundary_pair(z.index())?;
    let l = 2;

    println!(
        "{:>3} {:>20} {:>20} {:>10}",
        "N", "<S>", "closed form", "bound"
    );
    for n in 6..=20 {
        let s = string_order(
            &aklt.tensor,
            &aklt.symmetry,
            &bounds,
            &z,
            0,
            n - l,
            n,
            Normalization::Canonical,
        )?;
        let exact = aklt_string_order_closed_form(n);
        println!(
            "{n:>3} {:>20.15} {exact:>20.15} {:>10.6}",
            s.re,
            win_probability_bound(s.re)?
        );
    }
    println!(
        "limit <S> = {:.12}, limit bound = {:.6}",
        aklt_string_order_limit(),
        aklt_win_probability_limit()
    );

    let n = 12;
    let s = string_order(
        &aklt.tensor,
        &aklt.symmetry,
        &bounds,
        &z,
        0,
        n - l,
        n,
        Normalization::Canonical,
    )?;
    let t = twisted_string_order(
        &aklt.tensor,
        &aklt.symmetry,
        &bounds,
        &z,
        &x,
        0,
        n - l,
        n,
        Normalization::Canonical,
    )?;
    println!("N = {n}: <T>/<S> for (g, h) = (z, x) is {:.12}", (t / s).re);

    let ev: Vec<String> = spectrum(&aklt.tensor)
        .iter()
        .map(|e| format!("{:+.12}", e.re))
        .collect();
    println!(
        "transfer spectrum [{}], xi = {:.12}",
        ev.join(", "),
        correlation_length(&aklt.tensor)?
    );
    Ok(())
}
