// Copyright 2026 The leakmon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "leakmon/matching.h"

#include <algorithm>
#include <stdexcept>

namespace leakmon {

namespace {

class Blossom {
   public:
    Blossom(size_t n, const std::vector<WeightedEdge> &input, bool max_cardinality)
        : nvertex((int64_t)n), nedge((int64_t)input.size()), maxcardinality(max_cardinality) {
        int64_t maxweight = 0;
        for (const auto &e : input) {
            if (e.u == e.v || e.u >= n || e.v >= n) {
                throw std::invalid_argument("invalid matching edge");
            }
            // Doubled so every dual update stays integral.
            edges.push_back({(int64_t)e.u, (int64_t)e.v, 2 * e.weight});
            maxweight = std::max(maxweight, 2 * e.weight);
        }
        endpoint.resize(2 * nedge);
        for (int64_t p = 0; p < 2 * nedge; p++) {
            endpoint[p] = p % 2 == 0 ? edges[p / 2].i : edges[p / 2].j;
        }
        neighbend.assign(nvertex, {});
        for (int64_t k = 0; k < nedge; k++) {
            neighbend[edges[k].i].push_back(2 * k + 1);
            neighbend[edges[k].j].push_back(2 * k);
        }
        mate.assign(nvertex, -1);
        label.assign(2 * nvertex, 0);
        labelend.assign(2 * nvertex, -1);
        inblossom.resize(nvertex);
        for (int64_t v = 0; v < nvertex; v++) {
            inblossom[v] = v;
        }
        blossomparent.assign(2 * nvertex, -1);
        blossomchilds.assign(2 * nvertex, {});
        blossombase.assign(2 * nvertex, -1);
        for (int64_t v = 0; v < nvertex; v++) {
            blossombase[v] = v;
        }
        blossomendps.assign(2 * nvertex, {});
        bestedge.assign(2 * nvertex, -1);
        blossombestedges.assign(2 * nvertex, {});
        has_bestedges.assign(2 * nvertex, 0);
        for (int64_t b = nvertex; b < 2 * nvertex; b++) {
            unusedblossoms.push_back(b);
        }
        dualvar.assign(2 * nvertex, 0);
        for (int64_t v = 0; v < nvertex; v++) {
            dualvar[v] = maxweight;
        }
        allowedge.assign(nedge, 0);
    }

    std::vector<int64_t> solve() {
        for (int64_t t = 0; t < nvertex; t++) {
            std::fill(label.begin(), label.end(), 0);
            std::fill(bestedge.begin(), bestedge.end(), -1);
            for (int64_t b = nvertex; b < 2 * nvertex; b++) {
                blossombestedges[b].clear();
                has_bestedges[b] = 0;
            }
            std::fill(allowedge.begin(), allowedge.end(), 0);
            queue.clear();
            for (int64_t v = 0; v < nvertex; v++) {
                if (mate[v] == -1 && label[inblossom[v]] == 0) {
                    assign_label(v, 1, -1);
                }
            }
            bool augmented = false;
            while (true) {
                while (!queue.empty() && !augmented) {
                    int64_t v = queue.back();
                    queue.pop_back();
                    for (int64_t p : neighbend[v]) {
                        int64_t k = p / 2;
                        int64_t w = endpoint[p];
                        if (inblossom[v] == inblossom[w]) {
                            continue;
                        }
                        int64_t kslack = 0;
                        if (!allowedge[k]) {
                            kslack = slack(k);
                            if (kslack <= 0) {
                                allowedge[k] = 1;
                            }
                        }
                        if (allowedge[k]) {
                            if (label[inblossom[w]] == 0) {
                                assign_label(w, 2, p ^ 1);
                            } else if (label[inblossom[w]] == 1) {
                                int64_t base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label[w] == 0) {
                                label[w] = 2;
                                labelend[w] = p ^ 1;
                            }
                        } else if (label[inblossom[w]] == 1) {
                            int64_t b = inblossom[v];
                            if (bestedge[b] == -1 || kslack < slack(bestedge[b])) {
                                bestedge[b] = k;
                            }
                        } else if (label[w] == 0) {
                            if (bestedge[w] == -1 || kslack < slack(bestedge[w])) {
                                bestedge[w] = k;
                            }
                        }
                    }
                }
                if (augmented) {
                    break;
                }

                int deltatype = -1;
                int64_t delta = 0;
                int64_t deltaedge = -1;
                int64_t deltablossom = -1;
                if (!maxcardinality) {
                    deltatype = 1;
                    delta = *std::min_element(dualvar.begin(), dualvar.begin() + nvertex);
                }
                for (int64_t v = 0; v < nvertex; v++) {
                    if (label[inblossom[v]] == 0 && bestedge[v] != -1) {
                        int64_t d = slack(bestedge[v]);
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge[v];
                        }
                    }
                }
                for (int64_t b = 0; b < 2 * nvertex; b++) {
                    if (blossomparent[b] == -1 && label[b] == 1 && bestedge[b] != -1) {
                        int64_t d = slack(bestedge[b]) / 2;
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge[b];
                        }
                    }
                }
                for (int64_t b = nvertex; b < 2 * nvertex; b++) {
                    if (blossombase[b] >= 0 && blossomparent[b] == -1 && label[b] == 2 &&
                        (deltatype == -1 || dualvar[b] < delta)) {
                        delta = dualvar[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if (deltatype == -1) {
                    deltatype = 1;
                    delta = std::max<int64_t>(0, *std::min_element(dualvar.begin(), dualvar.begin() + nvertex));
                }

                for (int64_t v = 0; v < nvertex; v++) {
                    if (label[inblossom[v]] == 1) {
                        dualvar[v] -= delta;
                    } else if (label[inblossom[v]] == 2) {
                        dualvar[v] += delta;
                    }
                }
                for (int64_t b = nvertex; b < 2 * nvertex; b++) {
                    if (blossombase[b] >= 0 && blossomparent[b] == -1) {
                        if (label[b] == 1) {
                            dualvar[b] += delta;
                        } else if (label[b] == 2) {
                            dualvar[b] -= delta;
                        }
                    }
                }

                if (deltatype == 1) {
                    break;
                } else if (deltatype == 2) {
                    allowedge[deltaedge] = 1;
                    int64_t i = edges[deltaedge].i;
                    int64_t j = edges[deltaedge].j;
                    if (label[inblossom[i]] == 0) {
                        std::swap(i, j);
                    }
                    queue.push_back(i);
                } else if (deltatype == 3) {
                    allowedge[deltaedge] = 1;
                    queue.push_back(edges[deltaedge].i);
                } else {
                    expand_blossom(deltablossom, false);
                }
            }
            if (!augmented) {
                break;
            }
            for (int64_t b = nvertex; b < 2 * nvertex; b++) {
                if (blossomparent[b] == -1 && blossombase[b] >= 0 && label[b] == 1 && dualvar[b] == 0) {
                    expand_blossom(b, true);
                }
            }
        }
        std::vector<int64_t> out(nvertex, -1);
        for (int64_t v = 0; v < nvertex; v++) {
            if (mate[v] >= 0) {
                out[v] = endpoint[mate[v]];
            }
        }
        return out;
    }

   private:
    struct E {
        int64_t i;
        int64_t j;
        int64_t w;
    };

    int64_t slack(int64_t k) const {
        return dualvar[edges[k].i] + dualvar[edges[k].j] - 2 * edges[k].w;
    }

    void leaves(int64_t b, std::vector<int64_t> &out) const {
        if (b < nvertex) {
            out.push_back(b);
            return;
        }
        for (int64_t t : blossomchilds[b]) {
            leaves(t, out);
        }
    }

    std::vector<int64_t> leaves(int64_t b) const {
        std::vector<int64_t> out;
        leaves(b, out);
        return out;
    }

    void assign_label(int64_t w, int t, int64_t p) {
        int64_t b = inblossom[w];
        label[w] = label[b] = t;
        labelend[w] = labelend[b] = p;
        bestedge[w] = bestedge[b] = -1;
        if (t == 1) {
            leaves(b, queue);
        } else if (t == 2) {
            int64_t base = blossombase[b];
            assign_label(endpoint[mate[base]], 1, mate[base] ^ 1);
        }
    }

    int64_t scan_blossom(int64_t v, int64_t w) {
        std::vector<int64_t> path;
        int64_t base = -1;
        while (v != -1 || w != -1) {
            int64_t b = inblossom[v];
            if (label[b] & 4) {
                base = blossombase[b];
                break;
            }
            path.push_back(b);
            label[b] = 5;
            if (labelend[b] == -1) {
                v = -1;
            } else {
                v = endpoint[labelend[b]];
                b = inblossom[v];
                v = endpoint[labelend[b]];
            }
            if (w != -1) {
                std::swap(v, w);
            }
        }
        for (int64_t b : path) {
            label[b] = 1;
        }
        return base;
    }

    void add_blossom(int64_t base, int64_t k) {
        int64_t v = edges[k].i;
        int64_t w = edges[k].j;
        int64_t bb = inblossom[base];
        int64_t bv = inblossom[v];
        int64_t bw = inblossom[w];
        int64_t b = unusedblossoms.back();
        unusedblossoms.pop_back();
        blossombase[b] = base;
        blossomparent[b] = -1;
        blossomparent[bb] = b;
        std::vector<int64_t> path;
        std::vector<int64_t> endps;
        while (bv != bb) {
            blossomparent[bv] = b;
            path.push_back(bv);
            endps.push_back(labelend[bv]);
            v = endpoint[labelend[bv]];
            bv = inblossom[v];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            blossomparent[bw] = b;
            path.push_back(bw);
            endps.push_back(labelend[bw] ^ 1);
            w = endpoint[labelend[bw]];
            bw = inblossom[w];
        }
        blossomchilds[b] = path;
        blossomendps[b] = endps;
        label[b] = 1;
        labelend[b] = labelend[bb];
        dualvar[b] = 0;
        for (int64_t leaf : leaves(b)) {
            if (label[inblossom[leaf]] == 2) {
                queue.push_back(leaf);
            }
            inblossom[leaf] = b;
        }
        std::vector<int64_t> bestedgeto(2 * nvertex, -1);
        for (int64_t sub : path) {
            std::vector<std::vector<int64_t>> nblists;
            if (!has_bestedges[sub]) {
                for (int64_t leaf : leaves(sub)) {
                    std::vector<int64_t> list;
                    for (int64_t p : neighbend[leaf]) {
                        list.push_back(p / 2);
                    }
                    nblists.push_back(std::move(list));
                }
            } else {
                nblists.push_back(blossombestedges[sub]);
            }
            for (const auto &nblist : nblists) {
                for (int64_t kk : nblist) {
                    int64_t i = edges[kk].i;
                    int64_t j = edges[kk].j;
                    if (inblossom[j] == b) {
                        std::swap(i, j);
                    }
                    int64_t bj = inblossom[j];
                    if (bj != b && label[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
                        bestedgeto[bj] = kk;
                    }
                }
            }
            blossombestedges[sub].clear();
            has_bestedges[sub] = 0;
            bestedge[sub] = -1;
        }
        blossombestedges[b].clear();
        for (int64_t kk : bestedgeto) {
            if (kk != -1) {
                blossombestedges[b].push_back(kk);
            }
        }
        has_bestedges[b] = 1;
        bestedge[b] = -1;
        for (int64_t kk : blossombestedges[b]) {
            if (bestedge[b] == -1 || slack(kk) < slack(bestedge[b])) {
                bestedge[b] = kk;
            }
        }
    }

    void expand_blossom(int64_t b, bool endstage) {
        auto childs = blossomchilds[b];
        for (int64_t s : childs) {
            blossomparent[s] = -1;
            if (s < nvertex) {
                inblossom[s] = s;
            } else if (endstage && dualvar[s] == 0) {
                expand_blossom(s, endstage);
            } else {
                for (int64_t leaf : leaves(s)) {
                    inblossom[leaf] = s;
                }
            }
        }
        if (!endstage && label[b] == 2) {
            const auto &ch = blossomchilds[b];
            const auto &ep = blossomendps[b];
            int64_t len = (int64_t)ch.size();
            auto at = [&](const std::vector<int64_t> &v, int64_t idx) {
                return v[(size_t)(((idx % len) + len) % len)];
            };
            int64_t entrychild = inblossom[endpoint[labelend[b] ^ 1]];
            int64_t j = (int64_t)(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
            int64_t jstep;
            int64_t endptrick;
            if (j & 1) {
                j -= len;
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            int64_t p = labelend[b];
            while (j != 0) {
                label[endpoint[p ^ 1]] = 0;
                label[endpoint[at(ep, j - endptrick) ^ endptrick ^ 1]] = 0;
                assign_label(endpoint[p ^ 1], 2, p);
                allowedge[at(ep, j - endptrick) / 2] = 1;
                j += jstep;
                p = at(ep, j - endptrick) ^ endptrick;
                allowedge[p / 2] = 1;
                j += jstep;
            }
            int64_t bv = at(ch, j);
            label[endpoint[p ^ 1]] = label[bv] = 2;
            labelend[endpoint[p ^ 1]] = labelend[bv] = p;
            bestedge[bv] = -1;
            j += jstep;
            while (at(ch, j) != entrychild) {
                bv = at(ch, j);
                if (label[bv] == 1) {
                    j += jstep;
                    continue;
                }
                int64_t found = -1;
                for (int64_t leaf : leaves(bv)) {
                    if (label[leaf] != 0) {
                        found = leaf;
                        break;
                    }
                }
                if (found >= 0) {
                    label[found] = 0;
                    label[endpoint[mate[blossombase[bv]]]] = 0;
                    assign_label(found, 2, labelend[found]);
                }
                j += jstep;
            }
        }
        label[b] = -1;
        labelend[b] = -1;
        blossomchilds[b].clear();
        blossomendps[b].clear();
        blossombase[b] = -1;
        blossombestedges[b].clear();
        has_bestedges[b] = 0;
        bestedge[b] = -1;
        unusedblossoms.push_back(b);
    }

    void augment_blossom(int64_t b, int64_t v) {
        int64_t t = v;
        while (blossomparent[t] != b) {
            t = blossomparent[t];
        }
        if (t >= nvertex) {
            augment_blossom(t, v);
        }
        auto &ch = blossomchilds[b];
        auto &ep = blossomendps[b];
        int64_t len = (int64_t)ch.size();
        auto at = [&](const std::vector<int64_t> &vec, int64_t idx) {
            return vec[(size_t)(((idx % len) + len) % len)];
        };
        int64_t i = (int64_t)(std::find(ch.begin(), ch.end(), t) - ch.begin());
        int64_t j = i;
        int64_t jstep;
        int64_t endptrick;
        if (i & 1) {
            j -= len;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        while (j != 0) {
            j += jstep;
            t = at(ch, j);
            int64_t p = at(ep, j - endptrick) ^ endptrick;
            if (t >= nvertex) {
                augment_blossom(t, endpoint[p]);
            }
            j += jstep;
            t = at(ch, j);
            if (t >= nvertex) {
                augment_blossom(t, endpoint[p ^ 1]);
            }
            mate[endpoint[p]] = p ^ 1;
            mate[endpoint[p ^ 1]] = p;
        }
        std::rotate(ch.begin(), ch.begin() + i, ch.end());
        std::rotate(ep.begin(), ep.begin() + i, ep.end());
        blossombase[b] = blossombase[ch[0]];
    }

    void augment_matching(int64_t k) {
        int64_t v = edges[k].i;
        int64_t w = edges[k].j;
        std::pair<int64_t, int64_t> starts[2] = {{v, 2 * k + 1}, {w, 2 * k}};
        for (auto [s, p] : starts) {
            while (true) {
                int64_t bs = inblossom[s];
                if (bs >= nvertex) {
                    augment_blossom(bs, s);
                }
                mate[s] = p;
                if (labelend[bs] == -1) {
                    break;
                }
                int64_t t = endpoint[labelend[bs]];
                int64_t bt = inblossom[t];
                s = endpoint[labelend[bt]];
                int64_t j = endpoint[labelend[bt] ^ 1];
                if (bt >= nvertex) {
                    augment_blossom(bt, j);
                }
                mate[j] = labelend[bt];
                p = labelend[bt] ^ 1;
            }
        }
    }

    int64_t nvertex;
    int64_t nedge;
    bool maxcardinality;
    std::vector<E> edges;
    std::vector<int64_t> endpoint;
    std::vector<std::vector<int64_t>> neighbend;
    std::vector<int64_t> mate;
    std::vector<int> label;
    std::vector<int64_t> labelend;
    std::vector<int64_t> inblossom;
    std::vector<int64_t> blossomparent;
    std::vector<std::vector<int64_t>> blossomchilds;
    std::vector<int64_t> blossombase;
    std::vector<std::vector<int64_t>> blossomendps;
    std::vector<int64_t> bestedge;
    std::vector<std::vector<int64_t>> blossombestedges;
    std::vector<uint8_t> has_bestedges;
    std::vector<int64_t> unusedblossoms;
    std::vector<int64_t> dualvar;
    std::vector<uint8_t> allowedge;
    std::vector<int64_t> queue;
};

}  // namespace

std::vector<int64_t> max_weight_matching(size_t num_vertices, const std::vector<WeightedEdge> &edges,
                                         bool max_cardinality) {
    if (edges.empty()) {
        return std::vector<int64_t>(num_vertices, -1);
    }
    return Blossom(num_vertices, edges, max_cardinality).solve();
}

}  // namespace leakmon
