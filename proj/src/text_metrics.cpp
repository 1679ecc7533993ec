#include "denseval/text_metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "denseval/errors.hpp"

namespace denseval {

TokenSequence tokenize(const std::string& text) {
  TokenSequence out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < n && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      std::string tok = text.substr(i, j - i);
      for (char& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      std::size_t b = 0, e = tok.size();
      while (b < e && std::ispunct(static_cast<unsigned char>(tok[b]))) ++b;
      while (e > b && std::ispunct(static_cast<unsigned char>(tok[e - 1]))) --e;
      if (e > b) out.push_back(tok.substr(b, e - b));
    }
    i = j;
  }
  return out;
}

NGramProfile ngram_profile(const TokenSequence& tokens, int n) {
  if (n < 1) throw std::domain_error("n-gram order must be >= 1");
  NGramProfile profile;
  profile.n = n;
  if (tokens.size() < static_cast<std::size_t>(n)) return profile;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    NGram g(tokens.begin() + i, tokens.begin() + i + n);
    ++profile.counts[std::move(g)];
  }
  return profile;
}

double modified_ngram_precision(const TokenSequence& candidate,
                                const std::vector<TokenSequence>& references,
                                int n) {
  if (references.empty())
    throw std::domain_error("modified_ngram_precision: no references");
  const NGramProfile cand = ngram_profile(candidate, n);
  std::size_t total = 0;
  for (const auto& [g, c] : cand.counts) total += c;
  if (total == 0) return 0.0;

  std::vector<NGramProfile> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(ngram_profile(r, n));

  std::size_t credited = 0;
  for (const auto& [g, c] : cand.counts) {
    int max_ref = 0;
    for (const auto& rp : refs) {
      auto it = rp.counts.find(g);
      if (it != rp.counts.end()) max_ref = std::max(max_ref, it->second);
    }
    credited += std::min(c, max_ref);
  }
  return static_cast<double>(credited) / static_cast<double>(total);
}

double brevity_penalty(std::size_t reference_len, std::size_t candidate_len) {
  if (candidate_len == 0)
    throw std::domain_error("brevity_penalty: candidate length 0");
  const double ratio = static_cast<double>(reference_len) /
                       static_cast<double>(candidate_len);
  return std::exp(-std::max(0.0, ratio - 1.0));
}

std::size_t effective_reference_length(const std::vector<TokenSequence>& references,
                                       std::size_t candidate_len) {
  if (references.empty())
    throw std::domain_error("effective_reference_length: no references");
  std::size_t best = references.front().size();
  auto distance = [&](std::size_t len) {
    return len > candidate_len ? len - candidate_len : candidate_len - len;
  };
  for (const auto& r : references) {
    const std::size_t len = r.size();
    if (distance(len) < distance(best) || (distance(len) == distance(best) && len < best))
      best = len;
  }
  return best;
}

BleuResult bleu(const TokenSequence& candidate,
                const std::vector<TokenSequence>& references, int n,
                BleuMode mode) {
  if (n < 1 || n > 4) throw std::domain_error("bleu: n must be in 1..4");
  if (references.empty()) throw std::domain_error("bleu: no references");

  BleuResult result;
  result.n = n;
  const std::size_t c = candidate.size();
  const std::size_t r = effective_reference_length(references, c);
  result.brevity_penalty = brevity_penalty(r, c);

  if (mode == BleuMode::Individual) {
    result.precision = modified_ngram_precision(candidate, references, n);
  } else {
    double log_sum = 0.0;
    bool zero = false;
    for (int k = 1; k <= n; ++k) {
      const double pk = modified_ngram_precision(candidate, references, k);
      if (pk == 0.0) {
        zero = true;
        break;
      }
      log_sum += std::log(pk);
    }
    result.precision = zero ? 0.0 : std::exp(log_sum / n);
  }
  result.score = result.precision * result.brevity_penalty * 100.0;
  return result;
}

namespace {

// Exact alignment search. An alignment matches each token at most once per
// side; every maximal alignment matches exactly min(count_cand, count_ref)
// occurrences of each word. Chunks = matched - adjacencies, where an
// adjacency is a pair (p -> r, p+1 -> r+1); so minimizing chunks means
// maximizing adjacencies. Branch and bound over candidate positions with a
// static suffix bound on attainable adjacencies.
class ChunkSearch {
public:
  ChunkSearch(const TokenSequence& cand_tokens, const TokenSequence& ref_tokens) {
    std::unordered_map<std::string, int> ids;
    auto id_of = [&](const std::string& t) {
      auto [it, inserted] = ids.emplace(t, static_cast<int>(ids.size()));
      return it->second;
    };
    for (const auto& t : cand_tokens) cand_.push_back(id_of(t));
    for (const auto& t : ref_tokens) ref_.push_back(id_of(t));
    const int words = static_cast<int>(ids.size());
    std::vector<int> cc(words, 0), rc(words, 0);
    for (int w : cand_) ++cc[w];
    for (int w : ref_) ++rc[w];
    ref_positions_.resize(words);
    for (int r = 0; r < static_cast<int>(ref_.size()); ++r)
      ref_positions_[ref_[r]].push_back(r);
    need_.resize(words);
    cand_left_.resize(words);
    for (int w = 0; w < words; ++w) {
      need_[w] = std::min(cc[w], rc[w]);
      cand_left_[w] = cc[w];
      total_needed_ += need_[w];
    }
    ref_used_.assign(ref_.size(), 0);

    // adj_possible[q]: the candidate bigram at q occurs somewhere in the
    // reference, so an adjacency at (q, q+1) is conceivable.
    const int C = static_cast<int>(cand_.size());
    std::set<std::pair<int, int>> ref_bigrams;
    for (std::size_t r = 0; r + 1 < ref_.size(); ++r)
      ref_bigrams.insert({ref_[r], ref_[r + 1]});
    adj_suffix_.assign(C + 1, 0);
    for (int q = C - 2; q >= 0; --q) {
      const int possible = ref_bigrams.count({cand_[q], cand_[q + 1]}) ? 1 : 0;
      adj_suffix_[q] = adj_suffix_[q + 1] + possible;
    }
  }

  // Returns (matched, chunks).
  std::pair<int, int> run() {
    if (total_needed_ == 0) return {0, 0};
    best_adj_ = -1;
    dfs(0, 0, -1);
    return {total_needed_, total_needed_ - best_adj_};
  }

private:
  void dfs(int p, int adj, int prev_ref) {
    const int C = static_cast<int>(cand_.size());
    if (p == C) {
      best_adj_ = std::max(best_adj_, adj);
      return;
    }
    const int upper = adj + adj_suffix_[prev_ref >= 0 ? p - 1 : p];
    if (upper <= best_adj_) return;

    const int w = cand_[p];
    // Extending the current run first finds low-chunk alignments early.
    const int extend = prev_ref >= 0 ? prev_ref + 1 : -1;
    if (extend >= 0 && extend < static_cast<int>(ref_.size()) &&
        ref_[extend] == w && !ref_used_[extend]) {
      apply_match(p, extend, adj + 1);
    }
    for (int r : ref_positions_[w]) {
      if (ref_used_[r] || r == extend) continue;
      apply_match(p, r, adj);  // non-extending match starts a new chunk
    }
    if (cand_left_[w] > need_[w]) {
      --cand_left_[w];
      dfs(p + 1, adj, -1);
      ++cand_left_[w];
    }
  }

  void apply_match(int p, int r, int adj_after) {
    const int w = cand_[p];
    ref_used_[r] = 1;
    --need_[w];
    --cand_left_[w];
    dfs(p + 1, adj_after, r);
    ++cand_left_[w];
    ++need_[w];
    ref_used_[r] = 0;
  }

  std::vector<int> cand_, ref_;
  std::vector<std::vector<int>> ref_positions_;
  std::vector<int> need_, cand_left_, adj_suffix_;
  std::vector<char> ref_used_;
  int total_needed_ = 0;
  int best_adj_ = -1;
};

}  // namespace

MeteorResult meteor(const TokenSequence& candidate, const TokenSequence& reference) {
  if (candidate.empty() || reference.empty())
    throw std::domain_error("meteor: empty candidate or reference");

  ChunkSearch search(candidate, reference);
  const auto [matched, chunks] = search.run();

  MeteorResult result;
  result.matched_unigrams = matched;
  result.chunk_count = chunks;
  if (matched == 0) return result;  // score 0, penalty defined as 0

  result.precision = static_cast<double>(matched) / candidate.size();
  result.recall = static_cast<double>(matched) / reference.size();
  result.fmean = 10.0 * result.precision * result.recall /
                 (result.recall + 9.0 * result.precision);
  const double frag = static_cast<double>(chunks) / matched;
  result.penalty = 0.5 * frag * frag * frag;
  result.score = result.fmean * (1.0 - result.penalty);
  return result;
}

EvalReport corpus_eval(const std::vector<std::pair<std::string, std::string>>& pairs,
                       const CorpusEvalOptions& options) {
  if (pairs.empty()) throw ValidationError("corpus_eval: empty pair list");

  struct Work {
    TokenSequence cand, ref;
  };
  std::vector<Work> work;
  EvalReport report;
  report.mode = options.mode;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    TokenSequence ref = tokenize(pairs[i].second);
    if (ref.empty()) {
      report.warnings.push_back("pair " + std::to_string(i) +
                                ": empty reference, skipped");
      ++report.pairs_skipped;
      continue;
    }
    TokenSequence cand = tokenize(pairs[i].first);
    if (cand.empty())
      report.warnings.push_back("pair " + std::to_string(i) +
                                ": empty candidate, scored 0");
    work.push_back({std::move(cand), std::move(ref)});
  }
  if (work.empty())
    throw ValidationError("corpus_eval: every pair skipped (empty references)");

  struct Row {
    std::array<double, 4> bleu{};
    double meteor = 0.0;
  };
  std::vector<Row> rows(work.size());
  for_each_index(work.size(), options.exec, [&](std::size_t i) {
    const Work& w = work[i];
    Row row;
    if (!w.cand.empty()) {
      const std::vector<TokenSequence> refs{w.ref};
      for (int n = 1; n <= 4; ++n)
        row.bleu[n - 1] = bleu(w.cand, refs, n, options.mode).score;
      row.meteor = meteor(w.cand, w.ref).score * 100.0;
    }
    rows[i] = row;
  });

  for (const Row& row : rows) {
    for (int n = 0; n < 4; ++n) report.bleu[n] += row.bleu[n];
    report.meteor += row.meteor;
  }
  const double count = static_cast<double>(rows.size());
  for (int n = 0; n < 4; ++n) report.bleu[n] /= count;
  report.meteor /= count;
  report.pairs_evaluated = rows.size();
  return report;
}

}  // namespace denseval
