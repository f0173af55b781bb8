/*
 * Copyright 2026 The ldseg authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "ldseg/model.hpp"

#include <algorithm>
#include <cmath>

#include "ldseg/errors.hpp"
#include "ldseg/prompts.hpp"

namespace ldseg {

void ModelConfig::validate() const {
  if (image_size <= 0 || patch_size <= 0) throw ValueError("image_size and patch_size must be positive");
  if (image_size % patch_size != 0) throw ValueError("image_size must be a multiple of patch_size");
  if (n_patches() <= 0) throw ValueError("patch grid must be non-empty");
  if (c_v <= 0 || c_l <= 0) throw ValueError("channel widths must be positive");
  if (c_v % 4 != 0) throw ValueError("c_v must be divisible by 4 (decoder upsampling channels)");
  if (c_v % vis_heads != 0 || c_l % lm_heads != 0 || c_v % dec_heads != 0)
    throw ValueError("channel widths must be divisible by their head counts");
  if (vis_depth < 1 || lm_depth < 1 || dec_depth < 1) throw ValueError("depths must be >= 1");
  if (max_seq_len < n_patches() + 8) throw ValueError("max_seq_len too small for the vision token block");
  if (tau < 0.0f || tau > 1.0f) throw ValueError("tau must lie in [0, 1]");
  if (lora.enabled && (lora.rank < 1 || lora.alpha <= 0.0f)) throw ValueError("bad low-rank adapter settings");
}

ag::Mat bilinear_matrix(int src_h, int src_w, int dst_h, int dst_w) {
  ag::Mat m = ag::Mat::Zero(static_cast<Eigen::Index>(dst_h) * dst_w, static_cast<Eigen::Index>(src_h) * src_w);
  const double sr = static_cast<double>(src_h) / dst_h;
  const double sc = static_cast<double>(src_w) / dst_w;
  for (int r = 0; r < dst_h; ++r) {
    for (int c = 0; c < dst_w; ++c) {
      const double y = std::max(0.0, std::min((r + 0.5) * sr - 0.5, static_cast<double>(src_h - 1)));
      const double x = std::max(0.0, std::min((c + 0.5) * sc - 0.5, static_cast<double>(src_w - 1)));
      const int y0 = static_cast<int>(std::floor(y));
      const int x0 = static_cast<int>(std::floor(x));
      const int y1 = std::min(y0 + 1, src_h - 1);
      const int x1 = std::min(x0 + 1, src_w - 1);
      const double wy = y - y0;
      const double wx = x - x0;
      const Eigen::Index row = static_cast<Eigen::Index>(r) * dst_w + c;
      m(row, static_cast<Eigen::Index>(y0) * src_w + x0) += static_cast<float>((1 - wy) * (1 - wx));
      m(row, static_cast<Eigen::Index>(y0) * src_w + x1) += static_cast<float>((1 - wy) * wx);
      m(row, static_cast<Eigen::Index>(y1) * src_w + x0) += static_cast<float>(wy * (1 - wx));
      m(row, static_cast<Eigen::Index>(y1) * src_w + x1) += static_cast<float>(wy * wx);
    }
  }
  return m;
}

std::vector<int> interleave_indices(int grid_h, int grid_w) {
  const int n = grid_h * grid_w;
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(n) * 4);
  for (int i2 = 0; i2 < 2 * grid_h; ++i2) {
    for (int j2 = 0; j2 < 2 * grid_w; ++j2) {
      const int k = (i2 % 2) * 2 + (j2 % 2);
      const int i = i2 / 2;
      const int j = j2 / 2;
      idx.push_back(k * n + i * grid_w + j);
    }
  }
  return idx;
}

SegModel::SegModel(ModelConfig cfg, Tokenizer tokenizer)
    : cfg_(std::move(cfg)), tk_(std::move(tokenizer)), init_rng_(cfg_.seed) {
  cfg_.validate();
  const int n = cfg_.n_patches();
  const int gs = cfg_.grid_side();
  const int pp = cfg_.patch_size * cfg_.patch_size;
  Rng& rng = init_rng_;

  patch_proj_ = nn::Linear(store_, "vis.patch", pp, cfg_.c_v, rng);
  vis_pos_ = store_.create("vis.pos", n, cfg_.c_v, 0.02f, rng);
  for (int d = 0; d < cfg_.vis_depth; ++d)
    vis_blocks_.emplace_back(store_, "vis.block" + std::to_string(d), cfg_.c_v, cfg_.vis_heads, rng);
  vis_ln_ = nn::LayerNorm(store_, "vis.ln_f", cfg_.c_v);

  tok_embed_ = store_.create("lm.tok_embed", tk_.size(), cfg_.c_l, 0.02f, rng);
  lm_pos_ = store_.create("lm.pos", cfg_.max_seq_len, cfg_.c_l, 0.02f, rng);
  for (int d = 0; d < cfg_.lm_depth; ++d)
    lm_blocks_.emplace_back(store_, "lm.block" + std::to_string(d), cfg_.c_l, cfg_.lm_heads, rng, cfg_.lora);
  lm_ln_ = nn::LayerNorm(store_, "lm.ln_f", cfg_.c_l);
  lm_head_ = nn::Linear(store_, "lm.head", cfg_.c_l, tk_.size(), rng);

  v2l_ = nn::Mlp2(store_, "proj.v2l", cfg_.c_v, cfg_.c_l, cfg_.c_l, rng);
  l2v_ = nn::Mlp2(store_, "proj.l2v", cfg_.c_l, cfg_.c_v, cfg_.c_v, rng);
  seg_head_ = nn::Mlp2(store_, "proj.seg", cfg_.c_l, cfg_.c_l, cfg_.c_v, rng);

  for (int d = 0; d < cfg_.dec_depth; ++d) {
    const std::string p = "dec.block" + std::to_string(d);
    TwoWayBlock b;
    b.prompt_to_grid = nn::MultiHeadAttention(store_, p + ".p2g", cfg_.c_v, cfg_.dec_heads, rng);
    b.ln_prompt_attn = nn::LayerNorm(store_, p + ".ln_pa", cfg_.c_v);
    b.mlp_fc1 = nn::Linear(store_, p + ".mlp_fc1", cfg_.c_v, 2 * cfg_.c_v, rng);
    b.mlp_fc2 = nn::Linear(store_, p + ".mlp_fc2", 2 * cfg_.c_v, cfg_.c_v, rng);
    b.ln_prompt_mlp = nn::LayerNorm(store_, p + ".ln_pm", cfg_.c_v);
    b.grid_to_prompt = nn::MultiHeadAttention(store_, p + ".g2p", cfg_.c_v, cfg_.dec_heads, rng);
    b.ln_grid = nn::LayerNorm(store_, p + ".ln_g", cfg_.c_v);
    dec_blocks_.push_back(std::move(b));
  }
  for (int k = 0; k < 4; ++k) up1_.w[k] = store_.create("dec.up1.w" + std::to_string(k), cfg_.c_v, cfg_.c_v / 2, 0.02f, rng);
  up1_.b = store_.create_const("dec.up1.b", 1, cfg_.c_v / 2, 0.0f);
  for (int k = 0; k < 4; ++k)
    up2_.w[k] = store_.create("dec.up2.w" + std::to_string(k), cfg_.c_v / 2, cfg_.c_v / 4, 0.02f, rng);
  up2_.b = store_.create_const("dec.up2.b", 1, cfg_.c_v / 4, 0.0f);
  hyper_ = nn::Mlp2(store_, "dec.hyper", cfg_.c_v, cfg_.c_v, cfg_.c_v / 4, rng);
  // Slightly negative output bias so an untrained decoder starts near-empty.
  mask_bias_ = store_.create_const("dec.bias", 1, 1, -1.0f);

  bilinear_ = std::make_shared<const ag::Mat>(bilinear_matrix(4 * gs, 4 * gs, cfg_.image_size, cfg_.image_size));
  interleave1_ = interleave_indices(gs, gs);
  interleave2_ = interleave_indices(2 * gs, 2 * gs);
}

PatchEmbeddingGrid SegModel::encode_image(const ImageSample& image) const {
  if (image.height != cfg_.image_size || image.width != cfg_.image_size)
    throw DimensionError("encode_image: image is " + std::to_string(image.height) + "x" +
                         std::to_string(image.width) + ", model expects " + std::to_string(cfg_.image_size) +
                         "x" + std::to_string(cfg_.image_size));
  const int gs = cfg_.grid_side();
  const int p = cfg_.patch_size;
  ag::Mat patches(cfg_.n_patches(), p * p);
  for (int pi = 0; pi < gs; ++pi)
    for (int pj = 0; pj < gs; ++pj)
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
          patches(pi * gs + pj, i * p + j) = image.pixels(pi * p + i, pj * p + j);

  ag::Var x = patch_proj_(ag::constant(std::move(patches)));
  x = ag::add(x, vis_pos_);
  for (const auto& block : vis_blocks_) x = block(x);
  x = vis_ln_(x);
  return PatchEmbeddingGrid{x, gs, gs};
}

ag::Var SegModel::project_v2l(ag::Var features) const {
  if (features->val.cols() != cfg_.c_v)
    throw DimensionError("project_v2l: expected width " + std::to_string(cfg_.c_v));
  return v2l_(std::move(features));
}

ag::Var SegModel::project_l2v(ag::Var features) const {
  if (features->val.cols() != cfg_.c_l)
    throw DimensionError("project_l2v: expected width " + std::to_string(cfg_.c_l));
  return l2v_(std::move(features));
}

ag::Var SegModel::project_seg(ag::Var seg_hidden) const {
  if (seg_hidden->val.cols() != cfg_.c_l)
    throw DimensionError("project_seg: expected width " + std::to_string(cfg_.c_l));
  return seg_head_(std::move(seg_hidden));
}

ag::Var SegModel::fused_grid(ag::Var vision_tokens) const {
  ag::Var through_language = project_l2v(project_v2l(vision_tokens));
  return ag::add(vision_tokens, through_language);
}

ag::Var SegModel::embed_rows(const std::vector<int>& ids) const { return ag::gather_rows(tok_embed_, ids); }

ag::Var SegModel::lm_hidden(ag::Var seq_embed) const {
  const int len = static_cast<int>(seq_embed->val.rows());
  if (len > cfg_.max_seq_len)
    throw ValueError("sequence length " + std::to_string(len) + " exceeds max_seq_len " +
                     std::to_string(cfg_.max_seq_len));
  ag::Var x = ag::add(seq_embed, ag::slice_rows(lm_pos_, 0, len));
  const ag::Mat bias = nn::causal_bias(len);
  for (const auto& block : lm_blocks_) x = block(x, &bias);
  return lm_ln_(x);
}

ag::Var SegModel::lm_logits(ag::Var hidden) const { return lm_head_(std::move(hidden)); }

SegModel::PromptLayout SegModel::split_prompt(const std::string& user_text) const {
  std::vector<int> ids;
  ids.push_back(tk_.bos_id());
  for (int id : tk_.encode(user_text)) ids.push_back(id);

  PromptLayout layout;
  int image_pos = -1;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == tk_.image_id()) {
      if (image_pos >= 0) throw ValueError("prompt contains multiple image placeholders");
      image_pos = static_cast<int>(i);
    }
  }
  if (image_pos < 0) throw ValueError("prompt lacks the image placeholder token");
  layout.prefix_ids.assign(ids.begin(), ids.begin() + image_pos);
  layout.suffix_ids.assign(ids.begin() + image_pos + 1, ids.end());
  layout.rows_before_suffix = static_cast<int>(layout.prefix_ids.size()) + cfg_.n_patches();
  layout.total_rows = layout.rows_before_suffix + static_cast<int>(layout.suffix_ids.size());
  return layout;
}

GenerationOutput SegModel::generate_text(const PatchEmbeddingGrid& grid, const std::string& user_text) const {
  ag::NoGradGuard no_grad;
  const PromptLayout layout = split_prompt(user_text);
  ag::Var vision_rows = project_v2l(grid.tokens);

  std::vector<int> generated;
  auto build_embed = [&]() {
    std::vector<ag::Var> parts{embed_rows(layout.prefix_ids), vision_rows};
    if (!layout.suffix_ids.empty()) parts.push_back(embed_rows(layout.suffix_ids));
    if (!generated.empty()) parts.push_back(embed_rows(generated));
    return ag::vcat(parts);
  };

  bool saw_eos = false;
  while (static_cast<int>(generated.size()) < cfg_.max_gen_len &&
         layout.total_rows + static_cast<int>(generated.size()) < cfg_.max_seq_len) {
    ag::Var hidden = lm_hidden(build_embed());
    ag::Var logits = lm_logits(ag::slice_rows(hidden, static_cast<int>(hidden->val.rows()) - 1, 1));
    Eigen::Index next = 0;
    logits->val.row(0).maxCoeff(&next);
    if (static_cast<int>(next) == tk_.eos_id()) {
      saw_eos = true;
      break;
    }
    generated.push_back(static_cast<int>(next));
  }
  (void)saw_eos;

  GenerationOutput out;
  out.token_ids = generated;
  out.text = tk_.decode(generated);

  auto seg_it = std::find(generated.begin(), generated.end(), tk_.seg_id());
  if (seg_it != generated.end()) {
    const int seg_row = layout.total_rows + static_cast<int>(seg_it - generated.begin());
    ag::Var hidden = lm_hidden(build_embed());
    out.seg_hidden = ag::Mat(hidden->val.row(seg_row));
  }
  return out;
}

ag::Var SegModel::upsample(const Upsample2x& up, ag::Var grid, const std::vector<int>& interleave) const {
  std::vector<ag::Var> shifted;
  shifted.reserve(4);
  for (int k = 0; k < 4; ++k) shifted.push_back(ag::matmul(grid, up.w[k]));
  ag::Var stacked = ag::vcat(shifted);
  return ag::add_rowvec(ag::gather_rows(stacked, interleave), up.b);
}

ag::Var SegModel::decode_logits(ag::Var prompt, ag::Var fused, int grid_h, int grid_w) const {
  if (!prompt) throw ValueError("decode: absent prompt embedding");
  if (prompt->val.cols() != cfg_.c_v || fused->val.cols() != cfg_.c_v)
    throw DimensionError("decode: prompt/grid width must equal c_v");
  if (fused->val.rows() != static_cast<Eigen::Index>(grid_h) * grid_w)
    throw DimensionError("decode: grid row count disagrees with grid shape");

  ag::Var tokens = prompt;
  ag::Var grid = fused;
  for (const auto& b : dec_blocks_) {
    tokens = b.ln_prompt_attn(ag::add(tokens, b.prompt_to_grid(tokens, grid)));
    tokens = b.ln_prompt_mlp(ag::add(tokens, b.mlp_fc2(ag::gelu(b.mlp_fc1(tokens)))));
    grid = b.ln_grid(ag::add(grid, b.grid_to_prompt(grid, tokens)));
  }

  ag::Var up = ag::gelu(upsample(up1_, grid, interleave1_));
  up = ag::gelu(upsample(up2_, up, interleave2_));
  ag::Var weights = hyper_(tokens); // 1 x C_v/4
  ag::Var logits = ag::matmul(up, ag::transpose(weights));
  logits = ag::add_scalar(logits, mask_bias_);
  return ag::fixed_linear(bilinear_, logits); // (H*W) x 1
}

MaskPrediction SegModel::decode_mask(ag::Var seg_hidden, ag::Var fused) const {
  if (!seg_hidden) throw ValueError("decode_mask: absent seg embedding");
  ag::Var prompt = project_seg(seg_hidden);
  ag::Var logits = decode_logits(prompt, fused, cfg_.grid_side(), cfg_.grid_side());
  ag::Var probs = ag::sigmoid(logits);

  MaskPrediction out;
  const int h = cfg_.image_size;
  const int w = cfg_.image_size;
  out.probabilities.resize(h, w);
  out.binary.resize(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const float p = probs->val(static_cast<Eigen::Index>(r) * w + c, 0);
      out.probabilities(r, c) = p;
      out.binary(r, c) = p >= cfg_.tau ? 1 : 0;
    }
  }
  return out;
}

SegResult SegModel::segment(const ImageSample& image, const std::string& class_name,
                            const std::string& modality) const {
  ag::NoGradGuard no_grad;
  const auto [user_text, target_text] = render_prompt(class_name, modality);
  (void)target_text;

  PatchEmbeddingGrid grid = encode_image(image);
  GenerationOutput gen = generate_text(grid, user_text);

  SegResult result;
  if (!gen.has_seg()) {
    result.mask.probabilities = ImageF::Zero(cfg_.image_size, cfg_.image_size);
    result.mask.binary = BinaryMask::Zero(cfg_.image_size, cfg_.image_size);
    result.text = gen.text.empty() ? std::string(kNoMaskMarker) : gen.text + " " + kNoMaskMarker;
    result.seg_emitted = false;
    return result;
  }
  ag::Var fused = fused_grid(grid.tokens);
  result.mask = decode_mask(ag::constant(*gen.seg_hidden), fused);
  result.text = gen.text;
  result.seg_emitted = true;
  return result;
}

TeacherForward SegModel::teacher_forward(const ImageSample& image, const std::string& class_name,
                                         const std::string& modality) const {
  const auto [user_text, target_text] = render_prompt(class_name, modality);
  const PromptLayout layout = split_prompt(user_text);

  std::vector<int> target_ids = tk_.encode(target_text);
  target_ids.push_back(tk_.eos_id());

  PatchEmbeddingGrid grid = encode_image(image);
  ag::Var vision_rows = project_v2l(grid.tokens);

  std::vector<ag::Var> parts{embed_rows(layout.prefix_ids), vision_rows};
  if (!layout.suffix_ids.empty()) parts.push_back(embed_rows(layout.suffix_ids));
  parts.push_back(embed_rows(target_ids));
  ag::Var hidden = lm_hidden(ag::vcat(parts));
  ag::Var logits = lm_logits(hidden);

  const int rows = static_cast<int>(logits->val.rows());
  std::vector<int> targets(static_cast<std::size_t>(rows), 0);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(rows), 0);
  // Row (p - 1) predicts the token at row p; score only ASSISTANT reply rows.
  for (std::size_t t = 0; t < target_ids.size(); ++t) {
    const int row = layout.total_rows - 1 + static_cast<int>(t);
    targets[static_cast<std::size_t>(row)] = target_ids[t];
    mask[static_cast<std::size_t>(row)] = 1;
  }
  ag::Var text_loss = ag::cross_entropy_rows(logits, std::move(targets), std::move(mask));

  auto seg_it = std::find(target_ids.begin(), target_ids.end(), tk_.seg_id());
  if (seg_it == target_ids.end()) throw ValueError("teacher_forward: target lacks the segmentation token");
  const int seg_row = layout.total_rows + static_cast<int>(seg_it - target_ids.begin());

  TeacherForward out;
  out.text_loss = text_loss;
  out.seg_hidden = ag::slice_rows(hidden, seg_row, 1);
  out.grid = grid.tokens;
  return out;
}

Eigen::RowVectorXf SegModel::pooled_feature(const ImageSample& image) const {
  ag::NoGradGuard no_grad;
  PatchEmbeddingGrid grid = encode_image(image);
  return grid.tokens->val.colwise().mean();
}

} // namespace ldseg
