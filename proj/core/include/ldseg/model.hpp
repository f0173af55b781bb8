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
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ldseg/autograd.hpp"
#include "ldseg/nn.hpp"
#include "ldseg/tokenizer.hpp"
#include "ldseg/types.hpp"

namespace ldseg {

struct ModelConfig {
  int image_size = 64;
  int patch_size = 16;
  int c_v = 64;  // vision channel width
  int c_l = 128; // language channel width
  int vis_depth = 2;
  int vis_heads = 4;
  int lm_depth = 4;
  int lm_heads = 4;
  int dec_depth = 2; // two-way cross-attention blocks
  int dec_heads = 2;
  int max_seq_len = 192;
  int max_gen_len = 48;
  float tau = 0.5f; // binarization threshold
  std::uint64_t seed = 0;
  nn::LoraSpec lora;

  int grid_side() const { return image_size / patch_size; }
  int n_patches() const { return grid_side() * grid_side(); }
  void validate() const;
};

/// Spatial grid of vision features; tokens is N x C_v.
struct PatchEmbeddingGrid {
  ag::Var tokens;
  int grid_h = 0;
  int grid_w = 0;
};

struct GenerationOutput {
  std::string text;
  std::vector<int> token_ids;        // generated ids, <eos> excluded
  std::optional<ag::Mat> seg_hidden; // 1 x C_l, last-layer state at the first [SEG]

  bool has_seg() const { return seg_hidden.has_value(); }
};

struct MaskPrediction {
  ImageF probabilities; // H x W in [0, 1]
  BinaryMask binary;    // H x W in {0, 1}
};

struct SegResult {
  MaskPrediction mask;
  std::string text;
  bool seg_emitted = false;
};

/// Losses-facing forward pass artifacts (teacher-forced).
struct TeacherForward {
  ag::Var text_loss;  // 1 x 1
  ag::Var seg_hidden; // 1 x C_l at the [SEG] position
  ag::Var grid;       // N x C_v vision embedding
};

/// The full vision-language segmentation model. Weights are immutable for
/// concurrent readers once training finished; training owns the single
/// writer role.
class SegModel {
public:
  SegModel(ModelConfig cfg, Tokenizer tokenizer);

  const ModelConfig& config() const { return cfg_; }
  const Tokenizer& tokenizer() const { return tk_; }
  nn::ParamStore& params() { return store_; }
  const nn::ParamStore& params() const { return store_; }

  /// Patchify + transformer encoding. Throws DimensionError when the image
  /// size disagrees with the configuration.
  PatchEmbeddingGrid encode_image(const ImageSample& image) const;

  /// Vision-to-language projection (2-layer MLP, GELU), row-wise.
  ag::Var project_v2l(ag::Var features) const;
  /// Language-to-vision projection, mirror widths.
  ag::Var project_l2v(ag::Var features) const;
  /// Projection of the [SEG] hidden state into the decoder prompt space.
  ag::Var project_seg(ag::Var seg_hidden) const;

  /// E_v + l2v(v2l(E_v)): the language-conditioned decoder input.
  ag::Var fused_grid(ag::Var vision_tokens) const;

  /// Greedy decoding from the templated prompt. The prompt must contain the
  /// image placeholder token exactly once; its position receives the N
  /// projected vision tokens.
  GenerationOutput generate_text(const PatchEmbeddingGrid& grid, const std::string& user_text) const;

  /// Prompt-conditioned mask decoding at image resolution.
  /// `prompt` is the projected seg embedding (1 x C_v).
  ag::Var decode_logits(ag::Var prompt, ag::Var fused, int grid_h, int grid_w) const;
  MaskPrediction decode_mask(ag::Var seg_hidden, ag::Var fused) const;

  /// Full text-driven pipeline: encode, prompt, generate, decode.
  SegResult segment(const ImageSample& image, const std::string& class_name, const std::string& modality) const;

  /// Teacher-forced pass over prompt+target for training.
  TeacherForward teacher_forward(const ImageSample& image, const std::string& class_name,
                                 const std::string& modality) const;

  /// Mean-pooled final-layer vision feature (feature-export hook).
  Eigen::RowVectorXf pooled_feature(const ImageSample& image) const;

  static constexpr const char* kNoMaskMarker = "[no-mask]";

private:
  struct TwoWayBlock {
    nn::MultiHeadAttention prompt_to_grid, grid_to_prompt;
    nn::LayerNorm ln_prompt_attn, ln_prompt_mlp, ln_grid;
    nn::Linear mlp_fc1, mlp_fc2;
  };

  ag::Var lm_hidden(ag::Var seq_embed) const;
  ag::Var lm_logits(ag::Var hidden) const;
  ag::Var embed_rows(const std::vector<int>& ids) const;

  struct PromptLayout {
    std::vector<int> prefix_ids; // includes <bos>, ends right before <image>
    std::vector<int> suffix_ids; // after <image> to end of prompt
    int rows_before_suffix = 0;  // prefix rows + N vision rows
    int total_rows = 0;
  };
  PromptLayout split_prompt(const std::string& user_text) const;

  ModelConfig cfg_;
  Tokenizer tk_;
  nn::ParamStore store_;
  Rng init_rng_;

  // vision encoder
  nn::Linear patch_proj_;
  ag::Var vis_pos_;
  std::vector<nn::TransformerBlock> vis_blocks_;
  nn::LayerNorm vis_ln_;

  // language model
  ag::Var tok_embed_;
  ag::Var lm_pos_;
  std::vector<nn::TransformerBlock> lm_blocks_;
  nn::LayerNorm lm_ln_;
  nn::Linear lm_head_;

  // projections
  nn::Mlp2 v2l_, l2v_, seg_head_;

  // mask decoder
  std::vector<TwoWayBlock> dec_blocks_;
  struct Upsample2x {
    std::array<ag::Var, 4> w; // one weight per 2x2 offset
    ag::Var b;
  };
  Upsample2x up1_, up2_;
  nn::Mlp2 hyper_;
  ag::Var mask_bias_;

  std::shared_ptr<const ag::Mat> bilinear_; // (H*W) x (16*N) fixed resize
  std::vector<int> interleave1_, interleave2_;

  ag::Var upsample(const Upsample2x& up, ag::Var grid, const std::vector<int>& interleave) const;
};

/// Bilinear interpolation matrix mapping a src_h x src_w grid (flattened
/// row-major) to dst_h x dst_w, align-corners=false convention.
ag::Mat bilinear_matrix(int src_h, int src_w, int dst_h, int dst_w);

/// Row-major interleave indices for one 2x upsampling step.
std::vector<int> interleave_indices(int grid_h, int grid_w);

} // namespace ldseg
