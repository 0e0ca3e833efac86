state s1 s2
init s1
trans s1 s2
trans s2 s2
label p s2
