#include "storyweave/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace storyweave {

namespace {

// Least-squares fit of y to `desired` subject to y[k] - y[k-1] >= gaps[k-1],
// via pool-adjacent-violators on the gap-shifted targets.
std::vector<double> project(const std::vector<double>& desired,
                            const std::vector<double>& gaps) {
  const std::size_t n = desired.size();
  std::vector<double> offset(n, 0);
  for (std::size_t k = 1; k < n; ++k) offset[k] = offset[k - 1] + gaps[k - 1];

  struct Block {
    double sum;
    std::size_t count;
    double mean() const { return sum / static_cast<double>(count); }
  };
  std::vector<Block> blocks;
  for (std::size_t k = 0; k < n; ++k) {
    blocks.push_back({desired[k] - offset[k], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      Block top = blocks.back();
      blocks.pop_back();
      blocks.back().sum += top.sum;
      blocks.back().count += top.count;
    }
  }
  std::vector<double> out;
  out.reserve(n);
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.count; ++i) out.push_back(b.mean() + offset[out.size()]);
  }
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                               "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                               "#bcbd22", "#17becf"};

}  // namespace

std::optional<double> GeometricStoryline::y_at(CharacterId c, int layer) const {
  const auto& curve = curves.at(c.value);
  if (curve.y.empty() || layer < curve.first_layer || layer > curve.last_layer()) {
    return std::nullopt;
  }
  return curve.y[layer - curve.first_layer];
}

std::vector<double> required_gaps(const StorylineInstance& inst,
                                  const CombinatorialStoryline& s, int layer,
                                  const RenderConfig& cfg) {
  const Layer& l = s.layers.at(layer);
  std::vector<int> owner(inst.num_characters(), -1);
  for (InteractionId id : l.interactions) {
    for (CharacterId c : inst.interaction(id).characters) owner[c.value] = id.value;
  }
  std::vector<double> gaps;
  for (std::size_t k = 1; k < l.order.size(); ++k) {
    const int a = owner[l.order[k - 1].value], b = owner[l.order[k].value];
    gaps.push_back(a >= 0 && a == b ? cfg.within_gap : cfg.between_gap);
  }
  return gaps;
}

double total_wiggle(const GeometricStoryline& g) {
  double total = 0;
  for (const auto& curve : g.curves) {
    for (std::size_t k = 1; k < curve.y.size(); ++k) total += std::abs(curve.y[k] - curve.y[k - 1]);
  }
  return total;
}

GeometricStoryline assign_coordinates(const StorylineInstance& inst,
                                      const CombinatorialStoryline& s,
                                      const RenderConfig& cfg) {
  GeometricStoryline g;
  const int layers = static_cast<int>(s.layers.size());
  const int n = static_cast<int>(inst.num_characters());

  double x = cfg.margin_left;
  for (int i = 0; i < layers; ++i) {
    if (i > 0) {
      x += cfg.x_step;
      if (s.layers[i].time != s.layers[i - 1].time) {
        x += cfg.slice_gap;
        g.separators.push_back(0.5 * (g.layer_x.back() + x));
      }
    }
    g.layer_x.push_back(x);
    g.layer_time.push_back(s.layers[i].time);
    g.layer_order.push_back(s.layers[i].order);
  }

  // y[layer][rank] in the layer's order.
  std::vector<std::vector<double>> y(layers);
  std::vector<std::vector<double>> gaps(layers);
  for (int i = 0; i < layers; ++i) {
    gaps[i] = required_gaps(inst, s, i, cfg);
    std::vector<double> init;
    for (std::size_t k = 0; k < s.layers[i].order.size(); ++k) {
      init.push_back(static_cast<double>(k) * cfg.between_gap);
    }
    y[i] = project(init, gaps[i]);
  }
  // rank[layer][character] or -1 when inactive.
  std::vector<std::vector<int>> rank(layers, std::vector<int>(n, -1));
  for (int i = 0; i < layers; ++i) {
    for (std::size_t k = 0; k < s.layers[i].order.size(); ++k) {
      rank[i][s.layers[i].order[k].value] = static_cast<int>(k);
    }
  }

  auto wiggle = [&] {
    double total = 0;
    for (int i = 0; i + 1 < layers; ++i) {
      for (int c = 0; c < n; ++c) {
        if (rank[i][c] >= 0 && rank[i + 1][c] >= 0) {
          total += std::abs(y[i][rank[i][c]] - y[i + 1][rank[i + 1][c]]);
        }
      }
    }
    return total;
  };

  auto relax_layer = [&](int i) {
    std::vector<double> desired = y[i];
    for (std::size_t k = 0; k < s.layers[i].order.size(); ++k) {
      const int c = s.layers[i].order[k].value;
      std::vector<double> neighbours;
      if (i > 0 && rank[i - 1][c] >= 0) neighbours.push_back(y[i - 1][rank[i - 1][c]]);
      if (i + 1 < layers && rank[i + 1][c] >= 0) neighbours.push_back(y[i + 1][rank[i + 1][c]]);
      if (!neighbours.empty()) desired[k] = median(std::move(neighbours));
    }
    y[i] = project(desired, gaps[i]);
  };

  double current = wiggle();
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    const auto saved = y;
    for (int i = 0; i < layers; ++i) relax_layer(i);
    for (int i = layers - 1; i >= 0; --i) relax_layer(i);
    const double next = wiggle();
    if (next > current) {
      y = saved;
      break;
    }
    const double improvement = current - next;
    current = next;
    if (improvement < cfg.min_improvement) break;
  }

  double top = std::numeric_limits<double>::max(), bottom = std::numeric_limits<double>::lowest();
  for (const auto& col : y) {
    for (double v : col) {
      top = std::min(top, v);
      bottom = std::max(bottom, v);
    }
  }
  if (top > bottom) top = bottom = 0;
  const double shift = cfg.margin_top - top;

  g.curves.resize(n);
  for (int c = 0; c < n; ++c) {
    auto& curve = g.curves[c];
    curve.character = CharacterId(c);
    for (int i = 0; i < layers; ++i) {
      if (rank[i][c] < 0) continue;
      if (curve.y.empty()) curve.first_layer = i;
      curve.y.push_back(y[i][rank[i][c]] + shift);
    }
    if (!curve.y.empty()) {
      curve.start_x = g.layer_x[curve.first_layer];
      curve.end_x = g.layer_x[curve.last_layer()];
    }
  }
  for (int i = 0; i < layers; ++i) {
    for (InteractionId id : s.layers[i].interactions) {
      InteractionBar bar{i, id, std::numeric_limits<double>::max(),
                         std::numeric_limits<double>::lowest()};
      for (CharacterId c : inst.interaction(id).characters) {
        const double v = y[i][rank[i][c.value]] + shift;
        bar.top = std::min(bar.top, v);
        bar.bottom = std::max(bar.bottom, v);
      }
      g.bars.push_back(bar);
    }
  }
  g.width = (g.layer_x.empty() ? cfg.margin_left : g.layer_x.back()) + cfg.margin_right;
  g.height = bottom - top + cfg.margin_top + cfg.margin_bottom;
  return g;
}

GeometricStoryline pad_short_curves(GeometricStoryline g, const RenderConfig& cfg) {
  for (auto& curve : g.curves) {
    if (curve.y.size() != 1) continue;
    const double x = g.layer_x[curve.first_layer];
    double left = x - cfg.short_curve_pad;
    double right = x + cfg.short_curve_pad;
    for (double sep : g.separators) {
      if (sep <= x) left = std::max(left, sep);
      if (sep >= x) right = std::min(right, sep);
    }
    curve.start_x = std::min(curve.start_x, left);
    curve.end_x = std::max(curve.end_x, right);
  }
  return g;
}

std::string emit_svg(const GeometricStoryline& g, const StorylineInstance& inst,
                     const RenderConfig& cfg) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.2f}\" "
      "height=\"{:.2f}\" viewBox=\"0 0 {:.2f} {:.2f}\">\n",
      g.width, g.height, g.width, g.height);

  const double axis_y = g.height - cfg.margin_bottom / 2;
  out += "<g class=\"separators\" stroke=\"#999999\" stroke-dasharray=\"4 4\">\n";
  for (double sep : g.separators) {
    out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", sep,
                       cfg.margin_top / 2, sep, axis_y - 12);
  }
  out += "</g>\n";

  out += "<g class=\"curves\" fill=\"none\" stroke-width=\"2\">\n";
  for (const auto& curve : g.curves) {
    if (curve.y.empty()) continue;
    const double x0 = g.layer_x[curve.first_layer];
    std::string d = fmt::format("M {:.2f} {:.2f}", curve.start_x, curve.y.front());
    if (curve.start_x < x0) d += fmt::format(" L {:.2f} {:.2f}", x0, curve.y.front());
    for (std::size_t k = 1; k < curve.y.size(); ++k) {
      const double xa = g.layer_x[curve.first_layer + k - 1];
      const double xb = g.layer_x[curve.first_layer + k];
      const double mid = 0.5 * (xa + xb);
      d += fmt::format(" C {:.2f} {:.2f} {:.2f} {:.2f} {:.2f} {:.2f}", mid, curve.y[k - 1], mid,
                       curve.y[k], xb, curve.y[k]);
    }
    const double xn = g.layer_x[curve.last_layer()];
    if (curve.end_x > xn) d += fmt::format(" L {:.2f} {:.2f}", curve.end_x, curve.y.back());
    out += fmt::format("<path d=\"{}\" stroke=\"{}\"/>\n", d,
                       kPalette[curve.character.value % kPalette.size()]);
  }
  out += "</g>\n";

  out += "<g class=\"interactions\" fill=\"#000000\">\n";
  for (const auto& bar : g.bars) {
    out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"6.00\" height=\"{:.2f}\"/>\n",
                       g.layer_x[bar.layer] - 3, bar.top - 5, bar.bottom - bar.top + 10);
  }
  out += "</g>\n";

  out += "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"11\" "
         "text-anchor=\"end\" dominant-baseline=\"middle\">\n";
  for (const auto& curve : g.curves) {
    if (curve.y.empty()) continue;
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", curve.start_x - 6,
                       curve.y.front(), escape_xml(inst.character_name(curve.character)));
  }
  out += "</g>\n";

  out += "<g class=\"axis\" font-family=\"sans-serif\" font-size=\"11\" "
         "text-anchor=\"middle\">\n";
  for (std::size_t i = 0; i < g.layer_x.size();) {
    std::size_t j = i;
    while (j < g.layer_x.size() && g.layer_time[j] == g.layer_time[i]) ++j;
    const double cx = 0.5 * (g.layer_x[i] + g.layer_x[j - 1]);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", cx, axis_y,
                       escape_xml(inst.timestamp_label(g.layer_time[i])));
    i = j;
  }
  out += "</g>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace storyweave
