#include "pmrc/codec.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <set>
#include <string>

#include "pmrc/error.hpp"

namespace pmrc {
namespace {

void check_block_size(const Field& field, std::size_t block_size) {
  if (block_size == 0 || block_size % field.symbol_bytes() != 0) {
    throw InvalidArgument("block size " + std::to_string(block_size) +
                          " is not a positive multiple of the symbol size");
  }
}

void check_data(const CodeParams& p, const Field& field, const BlockVector& x) {
  if (x.size() != p.data_blocks) {
    throw InvalidArgument("expected " + std::to_string(p.data_blocks) + " data blocks, got " +
                          std::to_string(x.size()));
  }
  check_block_size(field, x.block_size());
}

std::vector<std::size_t> checked_nodes(const CodeParams& p, std::span<const std::size_t> nodes) {
  std::vector<std::size_t> out(nodes.begin(), nodes.end());
  std::set<std::size_t> seen;
  for (std::size_t node : out) {
    if (node >= p.n) throw InvalidArgument("node " + std::to_string(node) + " out of range");
    if (!seen.insert(node).second) {
      throw InvalidArgument("duplicate node " + std::to_string(node));
    }
  }
  return out;
}

const Share& find_share(std::span<const Share> shares, std::size_t node, std::size_t blocks) {
  for (const Share& s : shares) {
    if (s.node == node) {
      if (s.blocks.size() != blocks) {
        throw InvalidArgument("share of node " + std::to_string(node) + " has " +
                              std::to_string(s.blocks.size()) + " blocks, expected " +
                              std::to_string(blocks));
      }
      return s;
    }
  }
  throw InvalidArgument("no share for node " + std::to_string(node));
}

std::size_t common_block_size(std::span<const Share> shares) {
  if (shares.empty()) throw InvalidArgument("no shares");
  const std::size_t bs = shares.front().blocks.block_size();
  for (const Share& s : shares) {
    if (s.blocks.block_size() != bs) throw InvalidArgument("shares differ in block size");
  }
  return bs;
}

std::vector<std::size_t> iota_vec(std::size_t first, std::size_t count) {
  std::vector<std::size_t> v(count);
  std::iota(v.begin(), v.end(), first);
  return v;
}

Matrix invert_or_invalid(const Matrix& m, const char* what) {
  try {
    return invert(m);
  } catch (const SingularMatrix& e) {
    throw InvalidConstruction(std::string(what) + " is singular (" + e.what() + ")");
  }
}

std::vector<std::size_t> distinct_share_nodes(std::span<const Share> shares) {
  std::vector<std::size_t> nodes;
  for (const Share& s : shares) nodes.push_back(s.node);
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
    throw InvalidArgument("duplicate shares for one node");
  }
  return nodes;
}

}  // namespace

// ---------------------------------------------------------------------------
// Encoding

void encode_specific_into(const CodeDefinition& code, const BlockVector& x,
                          std::span<Share> shares) {
  const CodeParams& p = code.params();
  const Field& f = code.field();
  check_data(p, f, x);
  for (Share& share : shares) {
    if (share.node >= p.n) {
      throw InvalidArgument("node " + std::to_string(share.node) + " out of range");
    }
    if (share.blocks.size() != p.alpha || share.blocks.block_size() != x.block_size()) {
      throw InvalidArgument("share buffer has the wrong shape");
    }
    for (std::size_t j = 0; j < p.alpha; ++j) {
      auto dst = share.blocks.block(j);
      bool first = true;
      for (std::size_t l = 0; l < p.d; ++l) {
        const Element coeff = code.matrices.psi(share.node, l);
        const std::uint32_t block = code.index(l, j);
        if (coeff == 0 || block == 0) continue;
        if (first) {
          f.region_mul(dst, x.block(block - 1), coeff);
          first = false;
        } else {
          f.region_madd(dst, x.block(block - 1), coeff);
        }
      }
      if (first) std::memset(dst.data(), 0, dst.size());
    }
  }
}

std::vector<Share> encode_specific(const CodeDefinition& code, const BlockVector& x,
                                   std::span<const std::size_t> nodes) {
  const CodeParams& p = code.params();
  check_data(p, code.field(), x);
  std::vector<Share> shares;
  for (std::size_t node : checked_nodes(p, nodes)) {
    shares.push_back({node, BlockVector(p.alpha, x.block_size(), BlockRole::Encoded)});
  }
  encode_specific_into(code, x, shares);
  return shares;
}

std::vector<Share> encode_specific(const CodeDefinition& code, const BlockVector& x) {
  const auto nodes = iota_vec(0, code.params().n);
  return encode_specific(code, x, nodes);
}

LinearEncoder::LinearEncoder(const GeneratorMatrix& gm)
    : params_(gm.params), systematic_(gm.systematic), map_(gm.g) {
  if (systematic_) parity_map_.emplace(gm.parity());
}

std::vector<Share> LinearEncoder::encode(const BlockVector& x) const {
  std::vector<Share> shares;
  shares.reserve(params_.n);
  for (std::size_t i = 0; i < params_.n; ++i) {
    shares.push_back({i, BlockVector(params_.alpha, x.block_size(), BlockRole::Encoded)});
  }
  encode_into(x, shares);
  return shares;
}

void LinearEncoder::encode_into(const BlockVector& x, std::span<Share> shares) const {
  if (x.size() != params_.data_blocks) throw InvalidArgument("wrong number of data blocks");
  if (shares.size() != params_.n) throw InvalidArgument("expected n shares");
  std::vector<std::span<std::uint8_t>> out;
  out.reserve(params_.encoded_blocks());
  for (Share& s : shares) {
    if (s.blocks.size() != params_.alpha || s.blocks.block_size() != x.block_size()) {
      throw InvalidArgument("share buffers do not match the code");
    }
    for (std::size_t j = 0; j < params_.alpha; ++j) out.push_back(s.blocks.block(j));
  }
  const auto in = const_views(x);
  map_.apply(in, out);
}

void LinearEncoder::encode_parity_into(const BlockVector& x, std::span<Share> shares) const {
  if (!parity_map_) throw InvalidArgument("encode_parity_into needs a systematic generator");
  if (x.size() != params_.data_blocks) throw InvalidArgument("wrong number of data blocks");
  if (shares.size() != params_.n) throw InvalidArgument("expected n shares");
  std::vector<std::span<std::uint8_t>> out;
  out.reserve(params_.encoded_blocks() - params_.data_blocks);
  const std::size_t first_parity = params_.data_blocks / params_.alpha;
  for (std::size_t i = first_parity; i < params_.n; ++i) {
    for (std::size_t j = 0; j < params_.alpha; ++j) out.push_back(shares[i].blocks.block(j));
  }
  const auto in = const_views(x);
  parity_map_->apply(in, out);
}

std::vector<Share> encode_linear(const GeneratorMatrix& gm, const BlockVector& x) {
  check_data(gm.params, gm.g.field(), x);
  return LinearEncoder(gm).encode(x);
}

BlockVector precode_systematic_specific(const CodeDefinition& code, const BlockVector& x) {
  const CodeParams& p = code.params();
  if (p.variant != Variant::Msr) {
    throw InvalidArgument("precoding applies to MSR codes; MBR codes are natively systematic");
  }
  check_data(p, code.field(), x);
  std::vector<Share> shares;
  for (std::size_t i = 0; i < p.k; ++i) {
    Share s{i, BlockVector(p.alpha, x.block_size(), BlockRole::Encoded)};
    std::memcpy(s.blocks.bytes().data(), x.block(i * p.alpha).data(),
                p.alpha * x.block_size());
    shares.push_back(std::move(s));
  }
  const auto nodes = iota_vec(0, p.k);
  BlockVector z;
  try {
    z = MsrDecoder(code, nodes).decode(shares);
  } catch (const InvalidConstruction& e) {
    throw InvalidConstruction(std::string("systematic precoding infeasible: ") + e.what());
  }
  z.set_role(BlockRole::Precoded);
  return z;
}

std::vector<Share> encode_systematic_specific(const CodeDefinition& code, const BlockVector& x) {
  const CodeParams& p = code.params();
  if (p.variant == Variant::Mbr) return encode_specific(code, x);
  const BlockVector z = precode_systematic_specific(code, x);
  std::vector<Share> shares;
  for (std::size_t i = 0; i < p.k; ++i) {
    Share s{i, BlockVector(p.alpha, x.block_size(), BlockRole::Encoded)};
    std::memcpy(s.blocks.bytes().data(), x.block(i * p.alpha).data(),
                p.alpha * x.block_size());
    shares.push_back(std::move(s));
  }
  const auto parity_nodes = iota_vec(p.k, p.n - p.k);
  for (Share& s : encode_specific(code, z, parity_nodes)) shares.push_back(std::move(s));
  return shares;
}

// ---------------------------------------------------------------------------
// Linear decoding

namespace {

bool is_unit_row(std::span<const Element> row) {
  std::size_t nonzero = 0;
  for (Element v : row) {
    if (v == 0) continue;
    if (v != 1 || ++nonzero > 1) return false;
  }
  return nonzero == 1;
}

// Greedy selection of independent rows in candidate order.
std::vector<std::size_t> select_independent(const Matrix& g, const std::vector<std::size_t>& order,
                                            std::size_t wanted_rank) {
  const Field& f = g.field();
  const std::size_t cols = g.cols();
  std::vector<std::vector<Element>> basis;
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> chosen;
  std::vector<Element> cand(cols);
  for (std::size_t row : order) {
    if (chosen.size() == wanted_rank) break;
    std::copy(g.row(row).begin(), g.row(row).end(), cand.begin());
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Element factor = cand[pivots[b]];
      if (factor == 0) continue;
      for (std::size_t c = 0; c < cols; ++c) {
        if (basis[b][c] != 0) cand[c] ^= f.mul(factor, basis[b][c]);
      }
    }
    const auto lead = std::find_if(cand.begin(), cand.end(), [](Element v) { return v != 0; });
    if (lead == cand.end()) continue;
    const Element scale = f.inv(*lead);
    for (Element& v : cand) v = f.mul(scale, v);
    pivots.push_back(static_cast<std::size_t>(lead - cand.begin()));
    basis.push_back(cand);
    chosen.push_back(row);
  }
  return chosen;
}

}  // namespace

LinearDecoder::LinearDecoder(const GeneratorMatrix& gm, std::span<const std::size_t> available_nodes,
                             std::span<const std::size_t> wanted)
    : params_(gm.params), map_(Matrix(gm.g.field(), 0, 0)) {
  const CodeParams& p = params_;
  std::vector<std::size_t> nodes = checked_nodes(p, available_nodes);
  std::sort(nodes.begin(), nodes.end());

  std::vector<std::size_t> unit_rows;
  std::vector<std::size_t> other_rows;
  for (std::size_t node : nodes) {
    for (std::size_t j = 0; j < p.alpha; ++j) {
      const std::size_t row = node * p.alpha + j;
      (is_unit_row(gm.g.row(row)) ? unit_rows : other_rows).push_back(row);
    }
  }
  std::vector<std::size_t> order = unit_rows;
  order.insert(order.end(), other_rows.begin(), other_rows.end());
  rows_ = select_independent(gm.g, order, p.data_blocks);
  if (rows_.size() < p.data_blocks) {
    throw Unrecoverable("only " + std::to_string(rows_.size()) + " independent symbols among " +
                        std::to_string(nodes.size()) + " nodes; " +
                        std::to_string(p.data_blocks) + " needed");
  }

  if (wanted.empty()) {
    wanted_ = iota_vec(0, p.data_blocks);
  } else {
    wanted_.assign(wanted.begin(), wanted.end());
    for (std::size_t w : wanted_) {
      if (w >= p.data_blocks) throw InvalidArgument("wanted block out of range");
    }
  }
  const Matrix inverse = invert(select_rows(gm.g, rows_));
  map_ = LinearMap(select_rows(inverse, wanted_));
}

BlockVector LinearDecoder::decode(std::span<const Share> shares) const {
  const std::size_t bs = common_block_size(shares);
  std::vector<std::span<const std::uint8_t>> in;
  in.reserve(rows_.size());
  for (std::size_t row : rows_) {
    const Share& s = find_share(shares, row / params_.alpha, params_.alpha);
    in.push_back(s.blocks.block(row % params_.alpha));
  }
  BlockVector out(wanted_.size(), bs, BlockRole::Data);
  const auto dst = views(out);
  map_.apply(in, dst);
  return out;
}

BlockVector decode_linear(const GeneratorMatrix& gm, std::span<const Share> shares,
                          std::span<const std::size_t> wanted) {
  const auto nodes = distinct_share_nodes(shares);
  return LinearDecoder(gm, nodes, wanted).decode(shares);
}

// ---------------------------------------------------------------------------
// MSR decoding

MsrDecoder::MsrDecoder(const CodeDefinition& code, std::span<const std::size_t> nodes)
    : code_(code),
      phi_dc_(code.field(), 0, 0),
      phi_map_(Matrix(code.field(), 0, 0)),
      assemble_(Matrix(code.field(), 0, 0)) {
  const CodeParams& p = code.params();
  if (p.variant != Variant::Msr) throw InvalidArgument("MsrDecoder needs an MSR code");
  nodes_ = checked_nodes(p, nodes);
  if (nodes_.size() != p.k) {
    throw InvalidArgument("MSR decoding needs exactly k=" + std::to_string(p.k) + " shares");
  }
  std::sort(nodes_.begin(), nodes_.end());
  const Field& f = code.field();
  const std::size_t k = p.k;
  const std::size_t a = p.alpha;

  phi_dc_ = select_rows(code.matrices.phi(), nodes_);
  phi_map_ = LinearMap(phi_dc_);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const Element diff =
          Field::sub(code.matrices.lambda[nodes_[i]], code.matrices.lambda[nodes_[j]]);
      if (diff == 0) {
        throw InvalidConstruction("lambda values of nodes " + std::to_string(nodes_[i]) +
                                  " and " + std::to_string(nodes_[j]) + " coincide");
      }
      pair_inv_.push_back(f.inv(diff));
    }
  }

  // k = alpha + 1: positions 0..alpha-1 are recovered, the last node only
  // contributes equations.
  for (std::size_t t = 0; t < a; ++t) {
    std::vector<std::size_t> others;
    for (std::size_t o = 0; o < k; ++o) {
      if (o != t) others.push_back(o);
    }
    columns_.emplace_back(invert_or_invalid(select_rows(phi_dc_, others), "Phi block"));
  }
  const auto sel = iota_vec(0, a);
  assemble_ = LinearMap(invert_or_invalid(select_rows(phi_dc_, sel), "Phi block"));
}

BlockVector MsrDecoder::decode(std::span<const Share> shares) const {
  const CodeParams& p = code_.params();
  const Field& f = code_.field();
  const std::size_t k = p.k;
  const std::size_t a = p.alpha;
  const std::size_t bs = common_block_size(shares);
  check_block_size(f, bs);

  std::vector<const Share*> dc;
  for (std::size_t node : nodes_) dc.push_back(&find_share(shares, node, a));

  // A(i, j) = C_i . phi_j
  BlockVector A(k * k, bs);
  for (std::size_t i = 0; i < k; ++i) {
    const auto in = const_views(dc[i]->blocks);
    std::vector<std::span<std::uint8_t>> out;
    for (std::size_t j = 0; j < k; ++j) out.push_back(A.block(i * k + j));
    phi_map_.apply(in, out);
  }

  // Off-diagonal entries of the symmetric P and Q, stored at (i, j) and (j, i).
  BlockVector P(k * k, bs);
  BlockVector Q(k * k, bs);
  std::size_t pair = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j, ++pair) {
      auto q = Q.block(i * k + j);
      std::memcpy(q.data(), A.block(i * k + j).data(), bs);
      region_xor(q, A.block(j * k + i));
      f.region_mul(q, q, pair_inv_[pair]);
      auto pij = P.block(i * k + j);
      std::memcpy(pij.data(), A.block(i * k + j).data(), bs);
      f.region_madd(pij, q, code_.matrices.lambda[nodes_[i]]);
      std::memcpy(Q.block(j * k + i).data(), q.data(), bs);
      std::memcpy(P.block(j * k + i).data(), pij.data(), bs);
    }
  }

  // V1(r, t) = (S1 phi_t^t)_r and V2(r, t) = (S2 phi_t^t)_r for t < alpha.
  BlockVector V1(a * a, bs);
  BlockVector V2(a * a, bs);
  for (std::size_t t = 0; t < a; ++t) {
    std::vector<std::span<const std::uint8_t>> in_p;
    std::vector<std::span<const std::uint8_t>> in_q;
    for (std::size_t o = 0; o < k; ++o) {
      if (o == t) continue;
      in_p.push_back(P.block(o * k + t));
      in_q.push_back(Q.block(o * k + t));
    }
    std::vector<std::span<std::uint8_t>> out1;
    std::vector<std::span<std::uint8_t>> out2;
    for (std::size_t r = 0; r < a; ++r) {
      out1.push_back(V1.block(r * a + t));
      out2.push_back(V2.block(r * a + t));
    }
    columns_[t].apply(in_p, out1);
    columns_[t].apply(in_q, out2);
  }

  // S(r, :) = V(r, :) * (Phi_sel^t)^-1; read the message out through L.
  BlockVector S(a, bs);
  BlockVector x(p.data_blocks, bs, BlockRole::Data);
  for (std::size_t half = 0; half < 2; ++half) {
    const BlockVector& V = half == 0 ? V1 : V2;
    for (std::size_t r = 0; r < a; ++r) {
      std::vector<std::span<const std::uint8_t>> in;
      for (std::size_t t = 0; t < a; ++t) in.push_back(V.block(r * a + t));
      const auto out = views(S);
      assemble_.apply(in, out);
      for (std::size_t c = 0; c < a; ++c) {
        const std::uint32_t block = code_.index(half * a + r, c);
        std::memcpy(x.block(block - 1).data(), S.block(c).data(), bs);
      }
    }
  }
  return x;
}

BlockVector decode_msr_specific(const CodeDefinition& code, std::span<const Share> shares) {
  const auto nodes = distinct_share_nodes(shares);
  return MsrDecoder(code, nodes).decode(shares);
}

// ---------------------------------------------------------------------------
// MBR decoding

MbrDecoder::MbrDecoder(const CodeDefinition& code, std::span<const std::size_t> nodes)
    : code_(code), phi_inv_(Matrix(code.field(), 0, 0)), delta_(code.field(), 0, 0) {
  const CodeParams& p = code.params();
  if (p.variant != Variant::Mbr) throw InvalidArgument("MbrDecoder needs an MBR code");
  nodes_ = checked_nodes(p, nodes);
  if (nodes_.size() != p.k) {
    throw InvalidArgument("MBR decoding needs exactly k=" + std::to_string(p.k) + " shares");
  }
  std::sort(nodes_.begin(), nodes_.end());
  const Matrix psi_dc = select_rows(code.matrices.psi, nodes_);
  phi_inv_ = LinearMap(invert_or_invalid(select_cols(psi_dc, iota_vec(0, p.k)), "Phi_DC"));
  delta_ = select_cols(psi_dc, iota_vec(p.k, p.d - p.k));
}

BlockVector MbrDecoder::decode(std::span<const Share> shares) const {
  const CodeParams& p = code_.params();
  const Field& f = code_.field();
  const std::size_t k = p.k;
  const std::size_t d = p.d;
  const std::size_t bs = common_block_size(shares);
  check_block_size(f, bs);

  std::vector<const Share*> dc;
  for (std::size_t node : nodes_) dc.push_back(&find_share(shares, node, p.alpha));

  BlockVector x(p.data_blocks, bs, BlockRole::Data);
  // T(r, m) lands directly in its data block.
  for (std::size_t m = 0; m < d - k; ++m) {
    std::vector<std::span<const std::uint8_t>> in;
    std::vector<std::span<std::uint8_t>> out;
    for (std::size_t i = 0; i < k; ++i) {
      in.push_back(dc[i]->blocks.block(k + m));
      out.push_back(x.block(code_.index(i, k + m) - 1));
    }
    phi_inv_.apply(in, out);
  }

  // W = R_left - Delta T^t
  BlockVector W(k * k, bs);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      auto w = W.block(i * k + c);
      std::memcpy(w.data(), dc[i]->blocks.block(c).data(), bs);
      for (std::size_t m = 0; m < d - k; ++m) {
        f.region_madd(w, x.block(code_.index(c, k + m) - 1), delta_(i, m));
      }
    }
  }

  BlockVector S(k, bs);
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<std::span<const std::uint8_t>> in;
    for (std::size_t i = 0; i < k; ++i) in.push_back(W.block(i * k + c));
    const auto out = views(S);
    phi_inv_.apply(in, out);
    for (std::size_t r = 0; r <= c; ++r) {
      std::memcpy(x.block(code_.index(r, c) - 1).data(), S.block(r).data(), bs);
    }
  }
  return x;
}

BlockVector decode_mbr_specific(const CodeDefinition& code, std::span<const Share> shares) {
  const auto nodes = distinct_share_nodes(shares);
  return MbrDecoder(code, nodes).decode(shares);
}

SpecificDecoder::SpecificDecoder(const CodeDefinition& code,
                                 std::span<const std::size_t> available, bool systematic)
    : code_(code), systematic_(systematic) {
  const CodeParams& p = code.params();
  std::vector<std::size_t> nodes = checked_nodes(p, available);
  std::sort(nodes.begin(), nodes.end());
  if (nodes.size() < p.k) {
    throw Unrecoverable("need shares from " + std::to_string(p.k) + " nodes, have " +
                        std::to_string(nodes.size()));
  }
  // sorted, so systematic nodes come first
  chosen_.assign(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(p.k));
  if (p.variant == Variant::Mbr) {
    mbr_.emplace(code, chosen_);
    return;
  }
  if (systematic_) {
    for (std::size_t i = 0; i < p.k; ++i) {
      if (!std::binary_search(nodes.begin(), nodes.end(), i)) missing_systematic_.push_back(i);
    }
    if (missing_systematic_.empty()) return;
  }
  msr_.emplace(code, chosen_);
}

BlockVector SpecificDecoder::decode(std::span<const Share> shares) const {
  const CodeParams& p = code_.params();
  if (mbr_) return mbr_->decode(shares);
  if (!systematic_) return msr_->decode(shares);

  const std::size_t bs = common_block_size(shares);
  BlockVector x(p.data_blocks, bs, BlockRole::Data);
  const std::size_t node_bytes = p.alpha * bs;
  for (std::size_t i = 0; i < p.k; ++i) {
    if (std::binary_search(missing_systematic_.begin(), missing_systematic_.end(), i)) continue;
    const Share& s = find_share(shares, i, p.alpha);
    std::memcpy(x.block(i * p.alpha).data(), s.blocks.bytes().data(), node_bytes);
  }
  if (!missing_systematic_.empty()) {
    const BlockVector message = msr_->decode(shares);
    for (const Share& s : encode_specific(code_, message, missing_systematic_)) {
      std::memcpy(x.block(s.node * p.alpha).data(), s.blocks.bytes().data(), node_bytes);
    }
  }
  return x;
}

BlockVector decode_specific(const CodeDefinition& code, std::span<const Share> shares,
                            bool systematic) {
  const auto nodes = distinct_share_nodes(shares);
  return SpecificDecoder(code, nodes, systematic).decode(shares);
}

// ---------------------------------------------------------------------------
// Repair

RepairPlan make_repair_plan(const CodeMatrices& code, std::size_t failed,
                            std::optional<std::vector<std::size_t>> helpers) {
  const CodeParams& p = code.params;
  if (failed >= p.n) throw InvalidArgument("failed node out of range");
  RepairPlan plan;
  plan.failed = failed;
  if (helpers) {
    plan.helpers = checked_nodes(p, *helpers);
    if (plan.helpers.size() != p.d) {
      throw InvalidArgument("repair needs exactly d=" + std::to_string(p.d) + " helpers");
    }
    if (std::find(plan.helpers.begin(), plan.helpers.end(), failed) != plan.helpers.end()) {
      throw InvalidArgument("the failed node cannot help its own repair");
    }
  } else {
    for (std::size_t i = 0; i < p.n && plan.helpers.size() < p.d; ++i) {
      if (i != failed) plan.helpers.push_back(i);
    }
  }
  const std::size_t width = p.variant == Variant::Msr ? p.alpha : p.d;
  for (std::size_t j = 0; j < width; ++j) plan.mu.push_back(code.psi(failed, j));
  const auto reads = static_cast<std::size_t>(
      std::count_if(plan.mu.begin(), plan.mu.end(), [](Element v) { return v != 0; }));
  plan.reads_per_helper.assign(plan.helpers.size(), reads);
  return plan;
}

RepairSymbol repair_helper(const Field& field, const Share& helper, const RepairPlan& plan) {
  if (std::find(plan.helpers.begin(), plan.helpers.end(), helper.node) == plan.helpers.end()) {
    throw InvalidArgument("node " + std::to_string(helper.node) + " is not a helper in this plan");
  }
  if (helper.blocks.size() != plan.mu.size()) {
    throw InvalidArgument("helper share has the wrong number of blocks");
  }
  RepairSymbol symbol{helper.node, std::vector<std::uint8_t>(helper.blocks.block_size(), 0), 0};
  for (std::size_t j = 0; j < plan.mu.size(); ++j) {
    if (plan.mu[j] == 0) continue;
    field.region_madd(symbol.block, helper.blocks.block(j), plan.mu[j]);
    ++symbol.blocks_read;
  }
  return symbol;
}

namespace {

Matrix repair_matrix(const CodeMatrices& code, const RepairPlan& plan) {
  const CodeParams& p = code.params;
  const Matrix inv = invert_or_invalid(select_rows(code.psi, plan.helpers), "helper matrix");
  if (p.variant == Variant::Mbr) return inv;
  // share_j = z_j + lambda_f z_{alpha+j}, with z = inv * symbols
  const Field& f = code.field();
  const Element lambda = code.lambda[plan.failed];
  Matrix out(f, p.alpha, p.d);
  for (std::size_t j = 0; j < p.alpha; ++j) {
    for (std::size_t c = 0; c < p.d; ++c) {
      out(j, c) = Field::add(inv(j, c), f.mul(lambda, inv(p.alpha + j, c)));
    }
  }
  return out;
}

}  // namespace

RepairCollector::RepairCollector(const CodeMatrices& code, const RepairPlan& plan)
    : failed_(plan.failed), helpers_(plan.helpers), map_(repair_matrix(code, plan)) {}

Share RepairCollector::collect(std::span<const std::span<const std::uint8_t>> symbols) const {
  if (symbols.size() != helpers_.size()) throw InvalidArgument("expected one symbol per helper");
  const std::size_t bs = symbols.front().size();
  for (const auto& s : symbols) {
    if (s.size() != bs) throw InvalidArgument("repair symbols differ in size");
  }
  Share share{failed_, BlockVector(map_.outputs(), bs, BlockRole::Encoded)};
  const auto out = views(share.blocks);
  map_.apply(symbols, out);
  return share;
}

Share RepairCollector::collect(std::span<const RepairSymbol> symbols) const {
  if (symbols.size() != helpers_.size()) throw InvalidArgument("expected one symbol per helper");
  std::vector<std::span<const std::uint8_t>> ordered;
  for (std::size_t h : helpers_) {
    const auto it = std::find_if(symbols.begin(), symbols.end(),
                                 [h](const RepairSymbol& s) { return s.helper == h; });
    if (it == symbols.end()) throw InvalidArgument("missing symbol from helper " + std::to_string(h));
    ordered.push_back(it->block);
  }
  return collect(ordered);
}

Share repair_collect(const CodeMatrices& code, const RepairPlan& plan,
                     std::span<const RepairSymbol> symbols) {
  return RepairCollector(code, plan).collect(symbols);
}

RepairReadCost repair_read_cost(const CodeMatrices& code, std::size_t failed) {
  const RepairPlan plan = make_repair_plan(code, failed);
  return RepairReadCost{failed, plan.reads_per_helper.front(), plan.mu.size()};
}

RepairCostSummary repair_cost_summary(const CodeMatrices& code) {
  RepairCostSummary summary;
  double total = 0.0;
  for (std::size_t f = 0; f < code.params.n; ++f) {
    summary.per_node.push_back(repair_read_cost(code, f));
    total += 1.0 - summary.per_node.back().read_fraction();
  }
  summary.reduction_headline = total / static_cast<double>(2 * code.params.k - 2);
  summary.reduction_uniform = total / static_cast<double>(code.params.n);
  return summary;
}

}  // namespace pmrc
