//! Reference results on six campus layouts: cost of the source strategy and, for
//! D = 1..5, the recurrent cost and its stated upper bound.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Gai,
    Gmi,
}

pub struct Row {
    pub metric: Metric,
    pub layout: char,
    pub agents: u32,
    pub j_pi: u32,
    /// `(J(D), bound(D))` for D = 1..5.
    pub per_d: [(u32, u32); 5],
}

/// Epsilon at D = 1 per layout, from the layout attribute table.
pub const EPSILON_1: [(char, f64); 6] = [
    ('A', 0.197),
    ('B', 0.178),
    ('C', 0.192),
    ('D', 0.171),
    ('E', 0.189),
    ('F', 0.185),
];

pub const ROWS: [Row; 72] = [
    Row { metric: Metric::Gai, layout: 'A', agents: 5, j_pi: 949, per_d: [(986, 1136), (1020, 1323), (1061, 1510), (1092, 1697), (1128, 1884)] },
    Row { metric: Metric::Gai, layout: 'A', agents: 6, j_pi: 950, per_d: [(989, 1137), (1023, 1324), (1062, 1511), (1101, 1699), (1130, 1886)] },
    Row { metric: Metric::Gai, layout: 'A', agents: 7, j_pi: 950, per_d: [(986, 1137), (1016, 1324), (1058, 1511), (1090, 1699), (1122, 1886)] },
    Row { metric: Metric::Gai, layout: 'A', agents: 8, j_pi: 1006, per_d: [(1042, 1204), (1075, 1402), (1119, 1601), (1141, 1799), (1192, 1997)] },
    Row { metric: Metric::Gai, layout: 'A', agents: 9, j_pi: 963, per_d: [(998, 1153), (1029, 1342), (1074, 1532), (1095, 1722), (1140, 1912)] },
    Row { metric: Metric::Gai, layout: 'A', agents: 10, j_pi: 1119, per_d: [(1162, 1339), (1203, 1560), (1242, 1780), (1284, 2001), (1327, 2221)] },
    Row { metric: Metric::Gai, layout: 'B', agents: 5, j_pi: 1457, per_d: [(1501, 1716), (1546, 1976), (1579, 2235), (1632, 2494), (1673, 2754)] },
    Row { metric: Metric::Gai, layout: 'B', agents: 6, j_pi: 1484, per_d: [(1531, 1748), (1576, 2012), (1613, 2276), (1663, 2541), (1699, 2805)] },
    Row { metric: Metric::Gai, layout: 'B', agents: 7, j_pi: 1498, per_d: [(1543, 1765), (1589, 2031), (1627, 2298), (1672, 2565), (1718, 2831)] },
    Row { metric: Metric::Gai, layout: 'B', agents: 8, j_pi: 1474, per_d: [(1514, 1736), (1561, 1999), (1595, 2261), (1647, 2523), (1686, 2786)] },
    Row { metric: Metric::Gai, layout: 'B', agents: 9, j_pi: 1490, per_d: [(1535, 1755), (1579, 2020), (1622, 2286), (1658, 2551), (1707, 2816)] },
    Row { metric: Metric::Gai, layout: 'B', agents: 10, j_pi: 1520, per_d: [(1564, 1791), (1609, 2061), (1652, 2332), (1689, 2602), (1736, 2873)] },
    Row { metric: Metric::Gai, layout: 'C', agents: 5, j_pi: 1454, per_d: [(1500, 1733), (1545, 2012), (1592, 2292), (1656, 2571), (1698, 2850)] },
    Row { metric: Metric::Gai, layout: 'C', agents: 6, j_pi: 1290, per_d: [(1329, 1538), (1367, 1785), (1401, 2033), (1462, 2281), (1504, 2528)] },
    Row { metric: Metric::Gai, layout: 'C', agents: 7, j_pi: 1632, per_d: [(1680, 1945), (1727, 2259), (1756, 2572), (1849, 2885), (1897, 3199)] },
    Row { metric: Metric::Gai, layout: 'C', agents: 8, j_pi: 1325, per_d: [(1361, 1579), (1398, 1834), (1432, 2088), (1489, 2343), (1541, 2597)] },
    Row { metric: Metric::Gai, layout: 'C', agents: 9, j_pi: 1387, per_d: [(1427, 1653), (1466, 1920), (1511, 2186), (1570, 2452), (1603, 2719)] },
    Row { metric: Metric::Gai, layout: 'C', agents: 10, j_pi: 1338, per_d: [(1379, 1595), (1418, 1852), (1455, 2109), (1514, 2366), (1556, 2622)] },
    Row { metric: Metric::Gai, layout: 'D', agents: 5, j_pi: 1334, per_d: [(1380, 1562), (1423, 1790), (1470, 2018), (1512, 2246), (1561, 2475)] },
    Row { metric: Metric::Gai, layout: 'D', agents: 6, j_pi: 1261, per_d: [(1297, 1477), (1330, 1692), (1376, 1908), (1408, 2124), (1460, 2339)] },
    Row { metric: Metric::Gai, layout: 'D', agents: 7, j_pi: 1264, per_d: [(1302, 1480), (1337, 1696), (1379, 1912), (1418, 2129), (1458, 2345)] },
    Row { metric: Metric::Gai, layout: 'D', agents: 8, j_pi: 1343, per_d: [(1385, 1573), (1425, 1802), (1472, 2032), (1509, 2262), (1562, 2491)] },
    Row { metric: Metric::Gai, layout: 'D', agents: 9, j_pi: 1343, per_d: [(1388, 1573), (1427, 1802), (1475, 2032), (1512, 2262), (1566, 2491)] },
    Row { metric: Metric::Gai, layout: 'D', agents: 10, j_pi: 1362, per_d: [(1406, 1595), (1451, 1828), (1495, 2061), (1539, 2294), (1583, 2527)] },
    Row { metric: Metric::Gai, layout: 'E', agents: 5, j_pi: 637, per_d: [(651, 757), (662, 878), (677, 998), (694, 1119), (701, 1239)] },
    Row { metric: Metric::Gai, layout: 'E', agents: 6, j_pi: 641, per_d: [(653, 762), (663, 883), (677, 1004), (552, 1126), (560, 1247)] },
    Row { metric: Metric::Gai, layout: 'E', agents: 7, j_pi: 643, per_d: [(656, 765), (666, 886), (681, 1008), (553, 1129), (701, 1251)] },
    Row { metric: Metric::Gai, layout: 'E', agents: 8, j_pi: 646, per_d: [(660, 768), (670, 890), (685, 1012), (703, 1134), (706, 1256)] },
    Row { metric: Metric::Gai, layout: 'E', agents: 9, j_pi: 639, per_d: [(653, 760), (663, 881), (534, 1001), (693, 1122), (698, 1243)] },
    Row { metric: Metric::Gai, layout: 'E', agents: 10, j_pi: 645, per_d: [(657, 767), (667, 889), (682, 1011), (700, 1133), (703, 1255)] },
    Row { metric: Metric::Gai, layout: 'F', agents: 5, j_pi: 696, per_d: [(722, 825), (744, 954), (780, 1082), (798, 1211), (827, 1340)] },
    Row { metric: Metric::Gai, layout: 'F', agents: 6, j_pi: 612, per_d: [(631, 725), (650, 838), (671, 952), (690, 1065), (711, 1178)] },
    Row { metric: Metric::Gai, layout: 'F', agents: 7, j_pi: 586, per_d: [(607, 694), (626, 803), (645, 911), (663, 1020), (690, 1128)] },
    Row { metric: Metric::Gai, layout: 'F', agents: 8, j_pi: 689, per_d: [(716, 816), (737, 944), (773, 1071), (794, 1199), (818, 1326)] },
    Row { metric: Metric::Gai, layout: 'F', agents: 9, j_pi: 663, per_d: [(689, 786), (710, 908), (745, 1031), (763, 1154), (789, 1276)] },
    Row { metric: Metric::Gai, layout: 'F', agents: 10, j_pi: 618, per_d: [(641, 732), (661, 847), (688, 961), (702, 1075), (730, 1190)] },
    Row { metric: Metric::Gmi, layout: 'A', agents: 5, j_pi: 1900, per_d: [(1977, 2274), (2046, 2649), (2121, 3023), (2188, 3397), (2260, 3772)] },
    Row { metric: Metric::Gmi, layout: 'A', agents: 6, j_pi: 1872, per_d: [(1941, 2240), (2010, 2610), (2079, 2978), (2152, 3347), (2220, 3716)] },
    Row { metric: Metric::Gmi, layout: 'A', agents: 7, j_pi: 1964, per_d: [(1940, 2350), (2006, 2738), (2076, 3125), (2148, 3512), (2220, 3899)] },
    Row { metric: Metric::Gmi, layout: 'A', agents: 8, j_pi: 1837, per_d: [(1910, 2198), (1974, 2561), (2055, 2923), (2116, 3285), (2190, 3646)] },
    Row { metric: Metric::Gmi, layout: 'A', agents: 9, j_pi: 1913, per_d: [(1989, 2289), (2056, 2667), (2133, 3044), (2200, 3420), (2280, 3797)] },
    Row { metric: Metric::Gmi, layout: 'A', agents: 10, j_pi: 3130, per_d: [(3255, 3746), (3366, 4363), (3486, 4980), (3604, 5596), (3710, 6213)] },
    Row { metric: Metric::Gmi, layout: 'B', agents: 5, j_pi: 2637, per_d: [(2726, 3106), (2812, 3576), (2895, 4045), (2972, 4515), (3055, 4984)] },
    Row { metric: Metric::Gmi, layout: 'B', agents: 6, j_pi: 2772, per_d: [(2867, 3265), (2952, 3759), (3051, 4252), (3124, 4746), (3205, 5239)] },
    Row { metric: Metric::Gmi, layout: 'B', agents: 7, j_pi: 2710, per_d: [(2800, 3192), (2886, 3675), (2976, 4157), (3048, 4640), (3125, 5122)] },
    Row { metric: Metric::Gmi, layout: 'B', agents: 8, j_pi: 2641, per_d: [(2725, 3111), (2808, 3581), (2898, 4051), (2976, 4521), (3045, 4991)] },
    Row { metric: Metric::Gmi, layout: 'B', agents: 9, j_pi: 2748, per_d: [(2838, 3237), (2928, 3726), (3015, 4215), (3096, 4705), (3170, 5194)] },
    Row { metric: Metric::Gmi, layout: 'B', agents: 10, j_pi: 2775, per_d: [(2866, 3268), (2954, 3763), (3042, 4257), (3120, 4751), (3195, 5245)] },
    Row { metric: Metric::Gmi, layout: 'C', agents: 5, j_pi: 3708, per_d: [(3810, 4419), (3924, 5132), (4044, 5844), (4200, 6556), (4330, 7268)] },
    Row { metric: Metric::Gmi, layout: 'C', agents: 6, j_pi: 2444, per_d: [(2524, 2913), (2600, 3382), (2670, 3852), (2780, 4321), (2870, 4790)] },
    Row { metric: Metric::Gmi, layout: 'C', agents: 7, j_pi: 3952, per_d: [(4074, 4710), (4192, 5470), (4302, 6228), (4472, 6987), (4610, 7746)] },
    Row { metric: Metric::Gmi, layout: 'C', agents: 8, j_pi: 2468, per_d: [(2546, 2941), (2612, 3416), (2691, 3890), (2784, 4363), (2890, 4837)] },
    Row { metric: Metric::Gmi, layout: 'C', agents: 9, j_pi: 2506, per_d: [(2585, 2987), (2660, 3468), (2739, 3949), (2848, 4431), (2940, 4912)] },
    Row { metric: Metric::Gmi, layout: 'C', agents: 10, j_pi: 2490, per_d: [(2569, 2968), (2642, 3446), (2721, 3924), (2824, 4402), (2925, 4880)] },
    Row { metric: Metric::Gmi, layout: 'D', agents: 5, j_pi: 4862, per_d: [(5032, 5693), (5182, 6525), (5364, 7356), (5508, 8188), (5685, 9019)] },
    Row { metric: Metric::Gmi, layout: 'D', agents: 6, j_pi: 2427, per_d: [(2506, 2842), (2578, 3257), (2664, 3672), (2732, 4087), (2830, 4502)] },
    Row { metric: Metric::Gmi, layout: 'D', agents: 7, j_pi: 4525, per_d: [(4630, 5298), (4760, 6073), (4923, 6846), (5064, 7620), (5200, 8394)] },
    Row { metric: Metric::Gmi, layout: 'D', agents: 8, j_pi: 4874, per_d: [(5041, 5707), (5182, 6541), (5364, 7374), (5496, 8208), (5685, 9041)] },
    Row { metric: Metric::Gmi, layout: 'D', agents: 9, j_pi: 4873, per_d: [(5041, 5706), (5182, 6540), (5364, 7373), (5492, 8206), (5685, 9039)] },
    Row { metric: Metric::Gmi, layout: 'D', agents: 10, j_pi: 4920, per_d: [(5089, 5761), (5242, 6603), (5418, 7444), (5568, 8285), (5745, 9127)] },
    Row { metric: Metric::Gmi, layout: 'E', agents: 5, j_pi: 1286, per_d: [(1315, 1529), (1342, 1772), (1374, 2015), (1408, 2258), (1425, 2501)] },
    Row { metric: Metric::Gmi, layout: 'E', agents: 6, j_pi: 1288, per_d: [(1315, 1531), (1342, 1775), (1374, 2018), (1276, 2262), (1305, 2505)] },
    Row { metric: Metric::Gmi, layout: 'E', agents: 7, j_pi: 1286, per_d: [(1315, 1529), (1342, 1772), (1374, 2015), (1276, 2258), (1425, 2501)] },
    Row { metric: Metric::Gmi, layout: 'E', agents: 8, j_pi: 1285, per_d: [(1315, 1527), (1342, 1771), (1374, 2014), (1408, 2256), (1425, 2499)] },
    Row { metric: Metric::Gmi, layout: 'E', agents: 9, j_pi: 1286, per_d: [(1315, 1529), (1342, 1772), (1239, 2015), (1404, 2258), (1425, 2501)] },
    Row { metric: Metric::Gmi, layout: 'E', agents: 10, j_pi: 1288, per_d: [(1315, 1531), (1342, 1775), (1374, 2018), (1408, 2262), (1425, 2505)] },
    Row { metric: Metric::Gmi, layout: 'F', agents: 5, j_pi: 1765, per_d: [(1830, 2091), (1886, 2418), (1959, 2745), (2016, 3071), (2085, 3398)] },
    Row { metric: Metric::Gmi, layout: 'F', agents: 6, j_pi: 1188, per_d: [(1228, 1407), (1268, 1628), (1308, 1847), (1352, 2067), (1390, 2287)] },
    Row { metric: Metric::Gmi, layout: 'F', agents: 7, j_pi: 1137, per_d: [(1180, 1347), (1218, 1558), (1257, 1768), (1300, 1978), (1340, 2189)] },
    Row { metric: Metric::Gmi, layout: 'F', agents: 8, j_pi: 1755, per_d: [(1820, 2079), (1874, 2404), (1947, 2729), (2008, 3054), (2065, 3378)] },
    Row { metric: Metric::Gmi, layout: 'F', agents: 9, j_pi: 1763, per_d: [(1830, 2089), (1886, 2415), (1959, 2741), (2016, 3068), (2085, 3394)] },
    Row { metric: Metric::Gmi, layout: 'F', agents: 10, j_pi: 1199, per_d: [(1242, 1420), (1284, 1643), (1329, 1864), (1368, 2086), (1415, 2308)] },
];
