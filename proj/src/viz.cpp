#include "senti/viz.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <json.hpp>
#include <map>

namespace senti::viz {

namespace {

template <typename Entry, typename Key>
void sort_and_truncate(std::vector<Entry>& entries, Key key, std::size_t top_k) {
  std::sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
    if (a.count != b.count) return a.count > b.count;
    return key(a) < key(b);
  });
  if (entries.size() > top_k) entries.resize(top_k);
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr int kChartWidth = 640;

std::string bar_chart(const std::vector<std::pair<std::string, std::uint64_t>>& bars, std::string_view title) {
  if (bars.empty()) throw ValidationError("cannot render a chart without data");
  constexpr int kLabelWidth = 180, kBarHeight = 20, kGap = 6, kTop = 36, kRight = 60;
  const std::uint64_t max_count = std::max_element(bars.begin(), bars.end(), [](auto& a, auto& b) {
                                    return a.second < b.second;
                                  })->second;
  const int height = kTop + static_cast<int>(bars.size()) * (kBarHeight + kGap) + kGap;
  const int span = kChartWidth - kLabelWidth - kRight;
  std::string out = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<text x=\"{}\" y=\"22\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
      kChartWidth, height, kChartWidth / 2, xml_escape(title));
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const int y = kTop + static_cast<int>(i) * (kBarHeight + kGap);
    const double w = max_count == 0 ? 0.0
                                    : static_cast<double>(span) * static_cast<double>(bars[i].second) /
                                          static_cast<double>(max_count);
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", kLabelWidth - 8,
                       y + kBarHeight - 6, xml_escape(bars[i].first));
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{:.2f}\" height=\"{}\" fill=\"#4c72b0\"/>\n", kLabelWidth, y,
                       w, kBarHeight);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{}\">{}</text>\n", kLabelWidth + w + 4, y + kBarHeight - 6,
                       bars[i].second);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace

NgramTable ngrams(std::span<const Document> documents, std::size_t n, std::size_t top_k) {
  if (n == 0) throw ValidationError("n-gram size must be at least 1");
  std::map<std::vector<std::string>, std::uint64_t> counts;
  for (const auto& d : documents) {
    if (d.tokens.size() < n) continue;
    for (std::size_t i = 0; i + n <= d.tokens.size(); ++i) {
      ++counts[std::vector<std::string>(d.tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                        d.tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
    }
  }
  NgramTable table;
  table.n = n;
  table.entries.reserve(counts.size());
  for (auto& [gram, count] : counts) table.entries.push_back({gram, count});
  sort_and_truncate(table.entries, [](const NgramEntry& e) -> const auto& { return e.gram; }, top_k);
  return table;
}

CloudWeights cloud_weights(std::span<const Document> documents, std::size_t top_k,
                           const std::unordered_set<std::string>& extra_stopwords) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& d : documents) {
    for (const auto& t : d.tokens) {
      if (!extra_stopwords.contains(t)) ++counts[t];
    }
  }
  CloudWeights w;
  for (auto& [word, count] : counts) w.entries.push_back({word, count});
  sort_and_truncate(w.entries, [](const CloudEntry& e) -> const auto& { return e.word; }, top_k);
  return w;
}

Distribution sentiment_distribution(std::span<const Document> documents) {
  Distribution dist{};
  for (const auto& d : documents) {
    if (!d.label) throw ValidationError(fmt::format("document '{}' has no sentiment label", d.id));
    ++dist[class_index(*d.label)];
  }
  return dist;
}

std::string ngram_csv(const NgramTable& table) {
  std::string out = "gram,count\n";
  for (const auto& e : table.entries) out += fmt::format("{},{}\n", join(e.gram, " "), e.count);
  return out;
}

std::string cloud_json(const CloudWeights& weights) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& e : weights.entries) j[e.word] = e.count;
  return j.dump(2) + "\n";
}

std::string distribution_csv(const Distribution& dist) {
  std::string out = "label,count\n";
  for (std::size_t c = 0; c < kNumClasses; ++c) out += fmt::format("{},{}\n", to_string(label_from_index(c)), dist[c]);
  return out;
}

std::string ngram_svg(const NgramTable& table) {
  std::vector<std::pair<std::string, std::uint64_t>> bars;
  for (const auto& e : table.entries) bars.emplace_back(join(e.gram, " "), e.count);
  return bar_chart(bars, table.n == 1 ? "Unigram frequency" : fmt::format("{}-gram frequency", table.n));
}

std::string distribution_svg(const Distribution& dist) {
  if (dist[0] + dist[1] + dist[2] == 0) throw ValidationError("cannot render a distribution of zero documents");
  std::vector<std::pair<std::string, std::uint64_t>> bars;
  for (std::size_t c = 0; c < kNumClasses; ++c) bars.emplace_back(std::string(to_string(label_from_index(c))), dist[c]);
  return bar_chart(bars, "Sentiment distribution");
}

std::string cloud_svg(const CloudWeights& weights) {
  if (weights.entries.empty()) throw ValidationError("cannot render an empty word cloud");
  constexpr double kMinFont = 12.0, kMaxFont = 48.0, kMargin = 10.0;
  std::uint64_t lo = weights.entries.front().count, hi = lo;
  for (const auto& e : weights.entries) {
    lo = std::min(lo, e.count);
    hi = std::max(hi, e.count);
  }
  auto font_size = [&](std::uint64_t c) {
    if (hi == lo) return kMaxFont;
    return kMinFont + (kMaxFont - kMinFont) * static_cast<double>(c - lo) / static_cast<double>(hi - lo);
  };
  // Rank-ordered rows: words fill a row left to right and wrap when the
  // estimated width (0.6 em per byte) would overflow.
  std::string body;
  double x = kMargin, row_top = kMargin, row_height = 0.0;
  for (const auto& e : weights.entries) {
    const double size = font_size(e.count);
    const double width = 0.6 * size * static_cast<double>(e.word.size());
    if (x > kMargin && x + width > kChartWidth - kMargin) {
      x = kMargin;
      row_top += row_height + 4.0;
      row_height = 0.0;
    }
    row_height = std::max(row_height, size);
    body += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"{:.1f}\">{}</text>\n", x, row_top + size, size,
                        xml_escape(e.word));
    x += width + 0.5 * size;
  }
  const double height = row_top + row_height + kMargin;
  return fmt::format(
             "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
             "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{:.0f}\" "
             "font-family=\"sans-serif\" fill=\"#333333\">\n",
             kChartWidth, std::ceil(height)) +
         body + "</svg>\n";
}

}  // namespace senti::viz
