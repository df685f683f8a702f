use super::books::ScramblerBook;
use super::metric::SelectionMetric;
use super::pilots::pilot_bits;
use super::{select_best, Selected};
use crate::error::{Error, Result};
use crate::shaping::{bits_to_index, index_to_bits, Symbol4D};

/// Candidate `i`: `binary(i)` pilot bits followed by `t_i XOR b`.
pub fn bsss_candidate_bits(info_bits: &[bool], book: &ScramblerBook, i: usize) -> Vec<bool> {
    let p = pilot_bits(book.n_t());
    let mut out = index_to_bits(&i.into(), p);
    out.extend(info_bits.iter().zip(book.mask(i)).map(|(b, t)| b ^ t));
    out
}

/// Bit-scrambling selection: every candidate goes through the full PAS
/// chain and the cheapest one is transmitted.
pub fn bsss_encode<F>(
    info_bits: &[bool],
    book: &ScramblerBook,
    dm_chain: F,
    metric: &dyn SelectionMetric,
) -> Result<Selected>
where
    F: Fn(&[bool]) -> Result<Vec<Symbol4D>> + Sync,
{
    if info_bits.len() != book.len() {
        return Err(Error::LengthMismatch {
            what: "BSSS information bits",
            expected: book.len(),
            actual: info_bits.len(),
        });
    }
    select_best(book.n_t(), |i| {
        let symbols = dm_chain(&bsss_candidate_bits(info_bits, book, i))?;
        let cost = metric.cost(&symbols)?.cost;
        Ok((symbols, cost))
    })
}

/// Strips the pilot bits and undoes the scrambling they select.
pub fn bsss_decode(received_bits: &[bool], book: &ScramblerBook) -> Result<Vec<bool>> {
    let p = pilot_bits(book.n_t());
    if received_bits.len() != p + book.len() {
        return Err(Error::LengthMismatch {
            what: "BSSS received bits",
            expected: p + book.len(),
            actual: received_bits.len(),
        });
    }
    let (pilots, payload) = received_bits.split_at(p);
    let index = bits_to_index(pilots);
    let index = usize::try_from(&index).unwrap_or(usize::MAX);
    if index >= book.n_t() {
        return Err(Error::PilotIndex {
            index,
            n_t: book.n_t(),
        });
    }
    Ok(payload
        .iter()
        .zip(book.mask(index))
        .map(|(b, t)| b ^ t)
        .collect())
}
