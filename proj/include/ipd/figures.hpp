#pragma once

#include <string>
#include <vector>

namespace ipd::figures {

// Level sets of the 1-D ball volume Phi(x, t) for the Canberra distance
// (4 t x / (1 - t^2)) next to the Euclidean one (2t, flat in x), over
// x in (0, 10) and t in (0, 0.1). Writes fig1_canberra.csv and
// fig1_euclidean.csv (columns x,t,phi; cell centers) plus fig1.svg, a
// two-panel heatmap colored by a linear ramp on log Phi shared between
// the panels. Returns the paths written. Resolution must be >= 64.
std::vector<std::string> fig1(const std::string& out_dir, int resolution);

// Eight boolean rasters of membership in 2-D Canberra balls: the four
// centers (10,1), (10,10), (5,5), (50,10) at radius 1 on the window
// (0,60] x (0,20], and radii 0.8, 0.6, 0.4, 0.2 around (10,10) on
// (0,40]^2. Writes one x,y,member CSV per ball plus fig2.svg.
std::vector<std::string> fig2(const std::string& out_dir, int resolution);

}  // namespace ipd::figures
